#pragma once

// Word-vector file ingestion (GloVe .txt / fastText .vec text layouts),
// exact-match lookup, and token-embedding pooling.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "s2s/core.hpp"

namespace s2s {

/// Immutable word → E-vector store. All vectors have exactly `dimension`
/// entries; words are unique (duplicates resolved at load time, last wins).
struct EmbeddingStore {
  std::size_t dimension = 0;
  std::map<std::string, std::vector<double>, std::less<>> entries;

  /// Exact-match retrieval; nullptr when the word is absent (not an error).
  const std::vector<double>* lookup(std::string_view word) const {
    const auto it = entries.find(word);
    return it == entries.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries.size(); }

  bool operator==(const EmbeddingStore&) const = default;
};

struct EmbeddingLoadResult {
  EmbeddingStore store;
  std::size_t duplicates = 0;  // lines whose word re-defined an earlier one
};

namespace detail {

inline double parse_vector_field(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || end != field.data() + field.size())
    throw ParseError("non-numeric vector value '" + std::string(field) + "'", line_no);
  return v;
}

// A fastText .vec header is a line of exactly two nonnegative integers
// ("count dim"); any other first line is data.
inline std::optional<std::pair<std::size_t, std::size_t>> parse_vec_header(
    const std::vector<std::string>& fields) {
  if (fields.size() != 2) return std::nullopt;
  std::size_t values[2];
  for (int i = 0; i < 2; ++i) {
    const std::string& f = fields[i];
    const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
    if (ec != std::errc{} || end != f.data() + f.size()) return std::nullopt;
  }
  return std::make_pair(values[0], values[1]);
}

}  // namespace detail

/// Parses one "word v1 v2 ... vE" entry per line. A fastText-style header
/// line "count dim" before the first entry is detected and skipped. E comes
/// from expected_dim if given, else the header, else the first data line.
inline EmbeddingLoadResult load_word_vectors(std::istream& in,
                                             std::optional<std::size_t> expected_dim = {}) {
  EmbeddingLoadResult result;
  std::optional<std::size_t> dim = expected_dim;
  if (dim && *dim == 0) throw std::invalid_argument("load_word_vectors: dimension must be positive");

  std::string line;
  std::size_t line_no = 0;
  bool saw_entry = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (!saw_entry && line_no == 1) {
      if (const auto header = detail::parse_vec_header(fields)) {
        if (header->second == 0) throw ParseError("header dimension must be positive", line_no);
        if (dim && *dim != header->second)
          throw ParseError("header dimension " + std::to_string(header->second) +
                               " does not match expected " + std::to_string(*dim),
                           line_no);
        dim = header->second;
        continue;
      }
    }
    if (fields.size() < 2) throw ParseError("expected a word and at least one value", line_no);
    const std::size_t row_dim = fields.size() - 1;
    if (!dim) dim = row_dim;
    if (row_dim != *dim)
      throw ParseError("expected " + std::to_string(*dim) + " values, found " +
                           std::to_string(row_dim),
                       line_no);
    std::vector<double> vec(row_dim);
    for (std::size_t j = 0; j < row_dim; ++j)
      vec[j] = detail::parse_vector_field(fields[j + 1], line_no);
    saw_entry = true;
    auto [it, inserted] = result.store.entries.insert_or_assign(fields[0], std::move(vec));
    (void)it;
    if (!inserted) ++result.duplicates;
  }
  if (!saw_entry) throw ParseError("no vector entries found", line_no == 0 ? 1 : line_no);
  result.store.dimension = *dim;
  return result;
}

inline EmbeddingLoadResult load_word_vectors(const std::string& text,
                                             std::optional<std::size_t> expected_dim = {}) {
  std::istringstream in(text);
  return load_word_vectors(in, expected_dim);
}

/// One entry per line, fields space-separated, reals at 6 significant
/// digits. load(serialize(store)) == store when values carry at most 6
/// significant digits.
inline void serialize_word_vectors(const EmbeddingStore& store, std::ostream& out) {
  char buf[64];
  for (const auto& [word, vec] : store.entries) {
    out << word;
    for (double v : vec) {
      std::snprintf(buf, sizeof(buf), "%.6g", v);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

inline std::string serialize_word_vectors(const EmbeddingStore& store) {
  std::ostringstream out;
  serialize_word_vectors(store, out);
  return out.str();
}

enum class PoolMode { mean, last };

/// Collapses token embeddings to one vector: element-wise average, or the
/// final token's embedding.
inline std::vector<double> pool(const std::vector<std::vector<double>>& vectors, PoolMode mode) {
  if (vectors.empty()) throw std::invalid_argument("pool: vector list must be nonempty");
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw std::invalid_argument("pool: ragged vector dimensions");
  }
  if (mode == PoolMode::last) return vectors.back();
  std::vector<double> out(dim, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < dim; ++j) out[j] += v[j];
  }
  for (double& x : out) x /= static_cast<double>(vectors.size());
  return out;
}

}  // namespace s2s
