#pragma once

// Core types for the s2s toolkit: sequences of symbols (characters or
// tokens), tokenization, and the scoring parameters shared by the
// alignment and distance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace s2s {

namespace detail {

inline double max3(double a, double b, double c) { return std::max(a, std::max(b, c)); }
inline double min3(double a, double b, double c) { return std::min(a, std::min(b, c)); }

}  // namespace detail

/// Error for malformed text inputs (matrix files, vector files, index
/// files). Carries the 1-based line number when one applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + std::move(message)
                                    : std::move(message)),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// UTF-8

namespace utf8 {

// Decodes the scalar value starting at text[pos], advancing pos. Bytes that
// do not form a valid scalar are passed through one byte at a time, so any
// byte string round-trips through decode + encode.
inline char32_t decode_next(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char b0 = byte(pos);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    pos += 1;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    pos += 1;
    return b0;
  }
  if (pos + len > text.size()) {
    pos += 1;
    return b0;
  }
  for (std::size_t i = 1; i < len; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) {
      pos += 1;
      return b0;
    }
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  // Overlong encodings and surrogates fall back to byte-at-a-time.
  const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
  if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    pos += 1;
    return b0;
  }
  pos += len;
  return cp;
}

inline void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(char32_t cp) {
  std::string out;
  encode(cp, out);
  return out;
}

inline std::string encode(std::u32string_view text) {
  std::string out;
  for (char32_t cp : text) encode(cp, out);
  return out;
}

/// Number of scalar values in a UTF-8 string.
inline std::size_t scalar_count(std::string_view text) {
  std::size_t pos = 0, n = 0;
  while (pos < text.size()) {
    decode_next(text, pos);
    ++n;
  }
  return n;
}

}  // namespace utf8

// ---------------------------------------------------------------------------
// Sequences
//
// A sequence is an ordered list of symbols. In character mode the symbol is
// one Unicode scalar value (char32_t); in token mode it is one token
// (std::string). Every algorithm in the library is a template over the
// symbol type, so both representations (and plain std::string, vectors of
// ints, ...) work directly.

using CharSeq = std::u32string;
using TokenSeq = std::vector<std::string>;
using Sequence = std::variant<CharSeq, TokenSeq>;

enum class TokenizeMode { chars, whitespace, delimiter };

/// One symbol per Unicode scalar value. Concatenating the symbols back
/// reproduces the input exactly.
inline CharSeq tokenize_chars(std::string_view text) {
  CharSeq out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) out.push_back(utf8::decode_next(text, pos));
  return out;
}

/// Maximal nonempty tokens separated by ASCII whitespace.
inline TokenSeq tokenize_whitespace(std::string_view text) {
  TokenSeq out;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

/// Maximal nonempty tokens separated by the given delimiter string.
inline TokenSeq tokenize_split(std::string_view text, std::string_view delim) {
  if (delim.empty()) throw std::invalid_argument("tokenize: delimiter must be nonempty");
  TokenSeq out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(delim, pos);
    if (next == std::string_view::npos) next = text.size();
    if (next > pos) out.emplace_back(text.substr(pos, next - pos));
    if (next == text.size()) break;
    pos = next + delim.size();
  }
  return out;
}

inline Sequence tokenize(std::string_view text, TokenizeMode mode, std::string_view delim = {}) {
  switch (mode) {
    case TokenizeMode::chars:
      return tokenize_chars(text);
    case TokenizeMode::whitespace:
      return tokenize_whitespace(text);
    case TokenizeMode::delimiter:
      return tokenize_split(text, delim);
  }
  throw std::invalid_argument("tokenize: unknown mode");
}

/// Display form of a symbol: tokens render as themselves, characters as
/// their UTF-8 encoding.
inline std::string symbol_text(const std::string& sym) { return sym; }
inline std::string symbol_text(char32_t sym) { return utf8::encode(sym); }
inline std::string symbol_text(char sym) { return std::string(1, sym); }

// ---------------------------------------------------------------------------
// Scoring parameters

/// Per-operation weights for the edit-distance family. Defaults give
/// unit-cost Levenshtein.
struct CostModel {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double substitute_cost = 1.0;
  double transpose_cost = 1.0;
  double match_cost = 0.0;

  void validate() const {
    const double ops[] = {insert_cost, delete_cost, substitute_cost, transpose_cost};
    for (double c : ops) {
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("CostModel: operation costs must be finite and nonnegative");
    }
    if (!std::isfinite(match_cost)) throw std::invalid_argument("CostModel: match cost must be finite");
  }
};

/// Linear gap penalty charged per gap symbol. Negative values penalize when
/// maximizing alignment score.
struct GapPenalty {
  double per_gap = -1.0;

  void validate() const {
    if (!std::isfinite(per_gap)) throw std::invalid_argument("GapPenalty: must be finite");
  }
};

/// Match/mismatch scoring over any symbol type.
struct UniformScoring {
  double match = 1.0;
  double mismatch = -1.0;

  template <class Sym>
  double operator()(const Sym& a, const Sym& b) const {
    return a == b ? match : mismatch;
  }
};

///// Convenience constructor for alignment scoring: score(x,x)=match,
/// score(x,y)=mismatch, plus a linear gap penalty.
inline std::pair<UniformScoring, GapPenalty> uniform_scoring(double match, double mismatch, double gap) {
  for (double v : {match, mismatch, gap}) {
    if (!std::isfinite(v)) throw std::invalid_argument("uniform_scoring: values must be finite");
  }
  return {UniformScoring{match, mismatch}, GapPenalty{gap}};
}

// ---------------------------------------------------------------------------
// Score matrix

/// Dense (n+1) x (m+1) dynamic-programming matrix, kept only on request.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> cells;

  ScoreMatrix() = default;
  ScoreMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), cells(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }

  bool operator==(const ScoreMatrix&) const = default;
};

// ---------------------------------------------------------------------------
// Substitution matrix

/// Total score table over an alphabet of symbols, e.g. BLOSUM. Pairs where
/// either symbol is outside the alphabet score default_score.
class SubstitutionMatrix {
 public:
  SubstitutionMatrix() = default;

  SubstitutionMatrix(std::vector<std::string> alphabet, std::vector<double> scores,
                     double default_score = 0.0)
      : alphabet_(std::move(alphabet)), scores_(std::move(scores)), default_(default_score) {
    if (scores_.size() != alphabet_.size() * alphabet_.size())
      throw std::invalid_argument("SubstitutionMatrix: score table must be square over the alphabet");
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      if (!index_.emplace(alphabet_[i], i).second)
        throw std::invalid_argument("SubstitutionMatrix: duplicate symbol in alphabet");
    }
  }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  double default_score() const { return default_; }

  double score(std::string_view a, std::string_view b) const {
    auto ia = index_.find(a);
    auto ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end()) return default_;
    return scores_[ia->second * alphabet_.size() + ib->second];
  }

  double operator()(const std::string& a, const std::string& b) const { return score(a, b); }
  double operator()(char32_t a, char32_t b) const { return score(utf8::encode(a), utf8::encode(b)); }
  double operator()(char a, char b) const {
    return score(std::string_view(&a, 1), std::string_view(&b, 1));
  }

  bool operator==(const SubstitutionMatrix& other) const {
    return alphabet_ == other.alphabet_ && scores_ == other.scores_ && default_ == other.default_;
  }

 private:
  std::vector<std::string> alphabet_;
  std::vector<double> scores_;
  double default_ = 0.0;
  std::map<std::string, std::size_t, std::less<>> index_;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) out.push_back(field);
  return out;
}

inline double parse_score_field(const std::string& field, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ParseError("non-numeric score '" + field + "'", line_no);
  }
  if (used != field.size()) throw ParseError("non-numeric score '" + field + "'", line_no);
  return v;
}

}  // namespace detail

/// Reads an NCBI-style substitution matrix: '#' comment lines, a header row
/// of symbols, then one row per symbol with numeric scores.
inline SubstitutionMatrix parse_substitution_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::string> row_symbols;
  std::vector<double> scores;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (header.empty()) {
      header = std::move(fields);
      for (std::size_t i = 0; i < header.size(); ++i) {
        for (std::size_t j = i + 1; j < header.size(); ++j) {
          if (header[i] == header[j]) throw ParseError("duplicate symbol '" + header[i] + "' in header", line_no);
        }
      }
      scores.reserve(header.size() * header.size());
      continue;
    }
    if (row_symbols.size() >= header.size())
      throw ParseError("unexpected extra row '" + fields[0] + "'", line_no);
    if (fields.size() != header.size() + 1)
      throw ParseError("expected " + std::to_string(header.size() + 1) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    const std::string& row_sym = fields[0];
    if (row_sym != header[row_symbols.size()])
      throw ParseError("row symbol '" + row_sym + "' does not match header symbol '" +
                           header[row_symbols.size()] + "'",
                       line_no);
    row_symbols.push_back(row_sym);
    for (std::size_t j = 1; j < fields.size(); ++j)
      scores.push_back(detail::parse_score_field(fields[j], line_no));
  }
  if (header.empty()) throw ParseError("empty matrix file", line_no == 0 ? 1 : line_no);
  if (row_symbols.size() != header.size())
    throw ParseError("expected " + std::to_string(header.size()) + " rows, found " +
                         std::to_string(row_symbols.size()),
                     line_no);
  return SubstitutionMatrix(std::move(header), std::move(scores));
}

inline SubstitutionMatrix parse_substitution_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_substitution_matrix(in);
}

/// Writes a matrix in the same format parse_substitution_matrix reads;
/// parse(serialize(M)) == M.
inline void serialize_substitution_matrix(const SubstitutionMatrix& m, std::ostream& out) {
  const auto& alpha = m.alphabet();
  const auto fmt = [](double v) {
    if (v == static_cast<long long>(v)) return std::to_string(static_cast<long long>(v));
    std::ostringstream ss;
    ss << v;
    return ss.str();
  };
  for (const auto& s : alpha) out << ' ' << s;
  out << '\n';
  for (const auto& a : alpha) {
    out << a;
    for (const auto& b : alpha) out << ' ' << fmt(m.score(a, b));
    out << '\n';
  }
}

inline std::string serialize_substitution_matrix(const SubstitutionMatrix& m) {
  std::ostringstream out;
  serialize_substitution_matrix(m, out);
  return out.str();
}

}  // namespace s2s
