#pragma once

// Command-line front end: every suite as a subcommand over inline text or
// files, with tokenization modes and plain or JSON output.
//
//   s2s <suite> <method> [operands] [flags]
//
// Exit codes: 0 success, 1 runtime/data error (missing file, malformed
// input, library precondition), 2 usage error. Nothing is written to the
// result stream on error paths.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "s2s/alignment.hpp"
#include "s2s/core.hpp"
#include "s2s/distance.hpp"
#include "s2s/embedding_io.hpp"
#include "s2s/lexical_search.hpp"
#include "s2s/render.hpp"
#include "s2s/similarity.hpp"
#include "s2s/vector_search.hpp"

namespace s2s::cli {

namespace detail {

using nlohmann::json;

struct Outcome {
  std::string method;
  json inputs;
  json result;
  std::string plain;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  // One logical string per file: the final newline is not part of the operand.
  if (!text.empty() && text.back() == '\n') {
    text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
  }
  return text;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::string format_number(double v) { return s2s::detail::format_cell_value(v); }

inline std::vector<double> parse_series(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string cur;
  const auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(s2s::detail::parse_vector_field(cur, 0));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (out.empty()) throw std::runtime_error(std::string(what) + ": no numeric values");
  return out;
}

// -- operand plumbing --------------------------------------------------------

struct TextOperands {
  std::string a, b, file_a, file_b;
  std::string mode = "char";
  std::string delim;
  CLI::Option* opt_a = nullptr;
  CLI::Option* opt_b = nullptr;
  CLI::Option* opt_file_a = nullptr;
  CLI::Option* opt_file_b = nullptr;
  CLI::Option* opt_delim = nullptr;
  bool has_mode = true;

  // filled by resolve()
  std::string text_a, text_b, desc_a, desc_b;
};

inline void add_text_operands(CLI::App* cmd, TextOperands& t, bool with_mode = true,
                              const char* default_mode = "char") {
  t.has_mode = with_mode;
  t.mode = default_mode;
  t.opt_a = cmd->add_option("A", t.a, "First operand, inline");
  t.opt_b = cmd->add_option("B", t.b, "Second operand, inline");
  t.opt_file_a = cmd->add_option("--file-a", t.file_a, "Read operand A from a UTF-8 file");
  t.opt_file_b = cmd->add_option("--file-b", t.file_b, "Read operand B from a UTF-8 file");
  if (with_mode) {
    cmd->add_option("--mode", t.mode, "Tokenization: char, whitespace, or delim")
        ->check(CLI::IsMember({"char", "whitespace", "delim"}))
        ->capture_default_str();
    t.opt_delim = cmd->add_option("--delim", t.delim, "Token separator for --mode delim");
  }
}

inline std::pair<std::string, std::string> resolve_one(const CLI::Option* inline_opt,
                                                       const CLI::Option* file_opt,
                                                       const std::string& inline_val,
                                                       const std::string& file_val,
                                                       const char* name) {
  const bool has_inline = inline_opt && inline_opt->count() > 0;
  const bool has_file = file_opt && file_opt->count() > 0;
  if (has_inline && has_file)
    throw CLI::ValidationError(std::string("operand ") + name +
                               " was given both inline and as a file");
  if (!has_inline && !has_file)
    throw CLI::ValidationError(std::string("operand ") + name +
                               " is missing: pass it inline or via a file flag");
  if (has_file) return {read_text_file(file_val), "@" + file_val};
  return {inline_val, inline_val};
}

inline void resolve(TextOperands& t) {
  std::tie(t.text_a, t.desc_a) = resolve_one(t.opt_a, t.opt_file_a, t.a, t.file_a, "A");
  std::tie(t.text_b, t.desc_b) = resolve_one(t.opt_b, t.opt_file_b, t.b, t.file_b, "B");
}

inline TokenizeMode resolve_mode(const TextOperands& t) {
  const bool delim_given = t.opt_delim && t.opt_delim->count() > 0;
  if (t.mode == "delim") {
    if (!delim_given || t.delim.empty())
      throw CLI::ValidationError("--mode delim requires a nonempty --delim");
    return TokenizeMode::delimiter;
  }
  if (delim_given) throw CLI::ValidationError("--delim is only valid with --mode delim");
  return t.mode == "char" ? TokenizeMode::chars : TokenizeMode::whitespace;
}

inline json operand_inputs(const TextOperands& t) {
  json j{{"a", t.desc_a}, {"b", t.desc_b}};
  if (t.has_mode) {
    j["mode"] = t.mode;
    if (t.mode == "delim") j["delim"] = t.delim;
  }
  return j;
}

template <class F>
void with_seqs(const TextOperands& t, F&& f) {
  const TokenizeMode mode = resolve_mode(t);
  if (mode == TokenizeMode::chars) {
    f(tokenize_chars(t.text_a), tokenize_chars(t.text_b));
  } else if (mode == TokenizeMode::whitespace) {
    f(tokenize_whitespace(t.text_a), tokenize_whitespace(t.text_b));
  } else {
    f(tokenize_split(t.text_a, t.delim), tokenize_split(t.text_b, t.delim));
  }
}

template <class Sym>
std::string join_symbols(const std::vector<Sym>& syms) {
  constexpr bool token_mode = std::is_same_v<Sym, std::string>;
  std::string out;
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (token_mode && i > 0) out += ' ';
    out += symbol_text(syms[i]);
  }
  return out;
}

// -- rendering flags ---------------------------------------------------------

struct RenderFlags {
  bool markers = false;
  std::size_t wrap = 0;
  std::size_t col_width = 0;
  std::string gap_symbol = "-";
};

inline void add_render_flags(CLI::App* cmd, RenderFlags& f) {
  cmd->add_flag("--markers", f.markers, "Add a marker row: | match, . mismatch, space gap");
  cmd->add_option("--wrap", f.wrap, "Columns per rendered block")->check(CLI::PositiveNumber);
  cmd->add_option("--col-width", f.col_width, "Minimum rendered column width")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gap-symbol", f.gap_symbol, "Text standing in for gaps")
      ->capture_default_str();
}

inline RenderOptions to_render_options(const RenderFlags& f) {
  RenderOptions opts;
  opts.gap_symbol = f.gap_symbol;
  opts.marker_row = f.markers;
  if (f.wrap > 0) opts.line_wrap = f.wrap;
  if (f.col_width > 0) opts.column_width = f.col_width;
  return opts;
}

template <class Sym>
void fill_alignment_outcome(Outcome& oc, const AlignmentResult<Sym>& res,
                            const RenderOptions& ropts) {
  const std::string rendered = render_alignment(res, ropts);
  json ja = json::array(), jb = json::array();
  for (const auto& cell : res.aligned_a) ja.push_back(cell ? json(symbol_text(*cell)) : json());
  for (const auto& cell : res.aligned_b) jb.push_back(cell ? json(symbol_text(*cell)) : json());
  oc.result = {{"score", res.score},
               {"aligned_a", std::move(ja)},
               {"aligned_b", std::move(jb)},
               {"rendered", rendered}};
  oc.plain = "score " + format_number(res.score);
  if (!rendered.empty()) {
    oc.plain += '\n';
    oc.plain += rendered;
  }
}

inline void fill_scalar_outcome(Outcome& oc, double value) {
  oc.result = value;
  oc.plain = format_number(value);
}

// -- embeddings --------------------------------------------------------------

inline EmbeddingStore load_store_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return load_word_vectors(in).store;
}

/// Embeds whitespace tokens through the store, skipping out-of-vocabulary
/// tokens; `who` names the operand in the zero-coverage error.
inline std::vector<std::vector<double>> in_vocab_rows(const TokenSeq& tokens,
                                                      const EmbeddingStore& store,
                                                      const std::string& who) {
  std::vector<std::vector<double>> rows;
  for (const auto& tok : tokens) {
    if (const auto* vec = store.lookup(tok)) rows.push_back(*vec);
  }
  if (rows.empty()) throw std::runtime_error(who + ": no in-vocabulary tokens");
  return rows;
}

inline std::vector<float> to_floats(const std::vector<double>& v) {
  return std::vector<float>(v.begin(), v.end());
}

inline PoolMode parse_pool(const std::string& name) {
  return name == "last" ? PoolMode::last : PoolMode::mean;
}

inline std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
  if (opt && opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("S2S_SEED")) {
    const std::string_view text(env);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size())
      throw CLI::ValidationError(std::string("S2S_SEED must be an unsigned integer, got '") +
                                 env + "'");
    return v;
  }
  return 42;
}

// -- suites ------------------------------------------------------------------

struct AlignScoreOpts {
  TextOperands ops;
  double match = 1.0, mismatch = -1.0, gap = -1.0;
  std::string matrix_file;
  CLI::Option* opt_matrix = nullptr;
  RenderFlags render;
};

inline void setup_align(CLI::App& app, Outcome& oc) {
  auto* align = app.add_subcommand("align", "Alignments, common subsequences, time warping");
  align->fallthrough();
  align->require_subcommand(1);

  const auto add_scored = [&oc, align](const char* name, const char* desc, int kind) {
    auto* cmd = align->add_subcommand(name, desc);
    cmd->fallthrough();
    auto h = std::make_shared<AlignScoreOpts>();
    add_text_operands(cmd, h->ops);
    cmd->add_option("--match", h->match, "Score for equal symbols")->capture_default_str();
    cmd->add_option("--mismatch", h->mismatch, "Score for unequal symbols")->capture_default_str();
    cmd->add_option("--gap", h->gap, "Per-gap penalty")->capture_default_str();
    h->opt_matrix = cmd->add_option("--matrix-file", h->matrix_file,
                                    "Substitution-matrix file providing symbol scores "
                                    "(overrides --match/--mismatch)");
    add_render_flags(cmd, h->render);
    cmd->callback([&oc, h, kind, name] {
      resolve(h->ops);
      oc.method = std::string("align.") + name;
      oc.inputs = operand_inputs(h->ops);
      std::optional<SubstitutionMatrix> sub;
      if (h->opt_matrix->count() > 0) {
        std::ifstream in(h->matrix_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open file: " + h->matrix_file);
        sub = parse_substitution_matrix(in);
      }
      const GapPenalty gp{h->gap};
      const RenderOptions ropts = to_render_options(h->render);
      with_seqs(h->ops, [&](const auto& sa, const auto& sb) {
        const auto run = [&](auto&& scorer) {
          if (kind == 0) {
            fill_alignment_outcome(oc, global_align(sa, sb, scorer, gp), ropts);
          } else if (kind == 1) {
            fill_alignment_outcome(oc, local_align(sa, sb, scorer, gp), ropts);
          } else {
            fill_alignment_outcome(oc, hirschberg_align(sa, sb, scorer, gp), ropts);
          }
        };
        if (sub) {
          run([&](const auto& x, const auto& y) { return (*sub)(x, y); });
        } else {
          run(UniformScoring{h->match, h->mismatch});
        }
      });
    });
  };
  add_scored("global", "Optimal end-to-end alignment (Needleman-Wunsch)", 0);
  add_scored("local", "Best-scoring local segment alignment (Smith-Waterman)", 1);
  add_scored("hirschberg", "Global alignment in linear space (Hirschberg)", 2);

  {
    auto* cmd = align->add_subcommand("lcsubstring", "Longest common substring");
    cmd->fallthrough();
    auto h = std::make_shared<TextOperands>();
    add_text_operands(cmd, *h);
    cmd->callback([&oc, h] {
      resolve(*h);
      oc.method = "align.lcsubstring";
      oc.inputs = operand_inputs(*h);
      with_seqs(*h, [&](const auto& sa, const auto& sb) {
        const auto res = longest_common_substring(sa, sb);
        json witnesses = json::array();
        oc.plain = "length " + std::to_string(res.length);
        for (const auto& w : res.witnesses) {
          const std::string text = join_symbols(w);
          witnesses.push_back(text);
          oc.plain += '\n';
          oc.plain += text;
        }
        oc.result = {{"length", res.length}, {"witnesses", std::move(witnesses)}};
      });
    });
  }

  {
    auto* cmd = align->add_subcommand("lcsubsequence", "Longest common subsequence");
    cmd->fallthrough();
    auto h = std::make_shared<TextOperands>();
    add_text_operands(cmd, *h);
    cmd->callback([&oc, h] {
      resolve(*h);
      oc.method = "align.lcsubsequence";
      oc.inputs = operand_inputs(*h);
      with_seqs(*h, [&](const auto& sa, const auto& sb) {
        const auto res = longest_common_subsequence(sa, sb);
        const std::string text = join_symbols(res.witness);
        oc.result = {{"length", res.length}, {"witness", text}};
        oc.plain = "length " + std::to_string(res.length);
        if (!text.empty()) {
          oc.plain += '\n';
          oc.plain += text;
        }
      });
    });
  }

  {
    auto* cmd = align->add_subcommand("dtw", "Dynamic time warping over numeric series");
    cmd->fallthrough();
    struct DtwOpts {
      TextOperands ops;
      std::string cost = "abs";
      std::string space = "full";
    };
    auto h = std::make_shared<DtwOpts>();
    add_text_operands(cmd, h->ops, /*with_mode=*/false);
    cmd->add_option("--cost", h->cost, "Local cost: abs or indicator")
        ->check(CLI::IsMember({"abs", "indicator"}))
        ->capture_default_str();
    cmd->add_option("--space", h->space, "DP space: full or linear")
        ->check(CLI::IsMember({"full", "linear"}))
        ->capture_default_str();
    cmd->callback([&oc, h] {
      resolve(h->ops);
      oc.method = "align.dtw";
      oc.inputs = operand_inputs(h->ops);
      oc.inputs["cost"] = h->cost;
      oc.inputs["space"] = h->space;
      const auto sa = parse_series(h->ops.text_a, "operand A");
      const auto sb = parse_series(h->ops.text_b, "operand B");
      const DtwSpace space = h->space == "full" ? DtwSpace::full : DtwSpace::linear;
      const WarpResult res = h->cost == "abs" ? dtw(sa, sb, AbsCost{}, space)
                                              : dtw(sa, sb, IndicatorCost{}, space);
      json path = json::array();
      std::string path_text;
      for (std::size_t p = 0; p < res.path.size(); ++p) {
        const auto& [i, j] = res.path[p];
        path.push_back(json::array({i, j}));
        if (p > 0) path_text += ' ';
        path_text += std::to_string(i) + "," + std::to_string(j);
      }
      oc.result = {{"cost", res.total_cost}, {"path", std::move(path)}};
      oc.plain = "cost " + format_number(res.total_cost) + "\n" + path_text;
    });
  }
}

struct EditCostOpts {
  TextOperands ops;
  double cost_insert = 1.0, cost_delete = 1.0, cost_substitute = 1.0, cost_transpose = 1.0,
         cost_match = 0.0;
  std::string space;
};

inline void add_cost_flags(CLI::App* cmd, EditCostOpts& h, bool with_transpose) {
  cmd->add_option("--cost-insert", h.cost_insert, "Insertion cost")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--cost-delete", h.cost_delete, "Deletion cost")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--cost-substitute", h.cost_substitute, "Substitution cost")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  if (with_transpose) {
    cmd->add_option("--cost-transpose", h.cost_transpose, "Transposition cost")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }
  cmd->add_option("--cost-match", h.cost_match, "Cost charged on equal symbols")
      ->capture_default_str();
}

inline CostModel to_cost_model(const EditCostOpts& h) {
  return CostModel{h.cost_insert, h.cost_delete, h.cost_substitute, h.cost_transpose,
                   h.cost_match};
}

inline json cost_inputs(const EditCostOpts& h, bool with_transpose) {
  json j{{"insert", h.cost_insert},
         {"delete", h.cost_delete},
         {"substitute", h.cost_substitute},
         {"match", h.cost_match}};
  if (with_transpose) j["transpose"] = h.cost_transpose;
  return j;
}

inline void setup_distance(CLI::App& app, Outcome& oc) {
  auto* dist = app.add_subcommand("distance", "Edit and set distances");
  dist->fallthrough();
  dist->require_subcommand(1);

  {
    auto* cmd = dist->add_subcommand("levenshtein", "Weighted insert/delete/substitute distance");
    cmd->fallthrough();
    auto h = std::make_shared<EditCostOpts>();
    h->space = "two-row";
    add_text_operands(cmd, h->ops);
    add_cost_flags(cmd, *h, /*with_transpose=*/false);
    cmd->add_option("--space", h->space, "DP space: full or two-row")
        ->check(CLI::IsMember({"full", "two-row"}))
        ->capture_default_str();
    cmd->callback([&oc, h] {
      resolve(h->ops);
      oc.method = "distance.levenshtein";
      oc.inputs = operand_inputs(h->ops);
      oc.inputs["costs"] = cost_inputs(*h, /*with_transpose=*/false);
      oc.inputs["space"] = h->space;
      with_seqs(h->ops, [&](const auto& sa, const auto& sb) {
        const auto res = levenshtein(sa, sb, to_cost_model(*h),
                                     h->space == "full" ? LevSpace::full : LevSpace::two_row);
        fill_scalar_outcome(oc, res.value);
      });
    });
  }

  {
    auto* cmd = dist->add_subcommand("damerau", "Levenshtein plus adjacent transpositions (OSA)");
    cmd->fallthrough();
    auto h = std::make_shared<EditCostOpts>();
    h->space = "reduced";
    add_text_operands(cmd, h->ops);
    add_cost_flags(cmd, *h, /*with_transpose=*/true);
    cmd->add_option("--space", h->space, "DP space: full or reduced")
        ->check(CLI::IsMember({"full", "reduced"}))
        ->capture_default_str();
    cmd->callback([&oc, h] {
      resolve(h->ops);
      oc.method = "distance.damerau";
      oc.inputs = operand_inputs(h->ops);
      oc.inputs["costs"] = cost_inputs(*h, /*with_transpose=*/true);
      oc.inputs["space"] = h->space;
      with_seqs(h->ops, [&](const auto& sa, const auto& sb) {
        const auto res =
            damerau_levenshtein(sa, sb, to_cost_model(*h),
                                h->space == "full" ? DamerauSpace::full : DamerauSpace::reduced);
        fill_scalar_outcome(oc, res.value);
      });
    });
  }

  {
    auto* cmd = dist->add_subcommand("hamming", "Positionwise mismatch count (equal lengths)");
    cmd->fallthrough();
    auto h = std::make_shared<TextOperands>();
    add_text_operands(cmd, *h);
    cmd->callback([&oc, h] {
      resolve(*h);
      oc.method = "distance.hamming";
      oc.inputs = operand_inputs(*h);
      with_seqs(*h, [&](const auto& sa, const auto& sb) {
        fill_scalar_outcome(oc, hamming(sa, sb).value);
      });
    });
  }

  {
    auto* cmd = dist->add_subcommand("jaccard", "1 - Jaccard similarity of symbol sets");
    cmd->fallthrough();
    auto h = std::make_shared<TextOperands>();
    add_text_operands(cmd, *h);
    cmd->callback([&oc, h] {
      resolve(*h);
      oc.method = "distance.jaccard";
      oc.inputs = operand_inputs(*h);
      with_seqs(*h, [&](const auto& sa, const auto& sb) {
        fill_scalar_outcome(oc, jaccard_distance(sa, sb).value);
      });
    });
  }
}

inline void setup_similarity(CLI::App& app, Outcome& oc) {
  auto* sim = app.add_subcommand("similarity", "Similarity measures");
  sim->fallthrough();
  sim->require_subcommand(1);

  const auto add_plain = [&oc, sim](const char* name, const char* desc, auto fn) {
    auto* cmd = sim->add_subcommand(name, desc);
    cmd->fallthrough();
    auto h = std::make_shared<TextOperands>();
    add_text_operands(cmd, *h);
    cmd->callback([&oc, h, fn, name] {
      resolve(*h);
      oc.method = std::string("similarity.") + name;
      oc.inputs = operand_inputs(*h);
      with_seqs(*h, [&](const auto& sa, const auto& sb) { fill_scalar_outcome(oc, fn(sa, sb)); });
    });
  };
  add_plain("jaccard", "Intersection-over-union of symbol sets",
            [](const auto& a, const auto& b) { return jaccard_similarity(a, b); });
  add_plain("jaro", "Jaro similarity",
            [](const auto& a, const auto& b) { return jaro(a, b); });
  add_plain("lcs", "Longest-common-subsequence length over max length",
            [](const auto& a, const auto& b) { return lcs_similarity(a, b); });

  {
    auto* cmd = sim->add_subcommand("jaro-winkler", "Jaro with a common-prefix bonus");
    cmd->fallthrough();
    struct JwOpts {
      TextOperands ops;
      double p = 0.1;
      std::size_t max_prefix = 4;
    };
    auto h = std::make_shared<JwOpts>();
    add_text_operands(cmd, h->ops);
    cmd->add_option("--p", h->p, "Prefix scaling factor")
        ->check(CLI::Range(0.0, 0.25))
        ->capture_default_str();
    cmd->add_option("--max-prefix", h->max_prefix, "Longest prefix earning the bonus")
        ->capture_default_str();
    cmd->callback([&oc, h] {
      resolve(h->ops);
      oc.method = "similarity.jaro-winkler";
      oc.inputs = operand_inputs(h->ops);
      oc.inputs["p"] = h->p;
      oc.inputs["max_prefix"] = h->max_prefix;
      with_seqs(h->ops, [&](const auto& sa, const auto& sb) {
        fill_scalar_outcome(oc, jaro_winkler(sa, sb, h->p, h->max_prefix));
      });
    });
  }

  {
    auto* cmd = sim->add_subcommand("cosine", "Cosine of two numeric vectors");
    cmd->fallthrough();
    auto h = std::make_shared<TextOperands>();
    add_text_operands(cmd, *h, /*with_mode=*/false);
    cmd->callback([&oc, h] {
      resolve(*h);
      oc.method = "similarity.cosine";
      oc.inputs = operand_inputs(*h);
      const auto u = parse_series(h->text_a, "operand A");
      const auto v = parse_series(h->text_b, "operand B");
      fill_scalar_outcome(oc, cosine_similarity(u, v));
    });
  }

  {
    auto* cmd = sim->add_subcommand(
        "greedy", "Greedy max-cosine token matching (precision/recall/F1)");
    cmd->fallthrough();
    struct GreedyOpts {
      TextOperands ops;
      std::string vectors;
    };
    auto h = std::make_shared<GreedyOpts>();
    add_text_operands(cmd, h->ops, /*with_mode=*/true, "whitespace");
    cmd->add_option("--vectors", h->vectors, "Word-vector file embedding the tokens")
        ->required();
    cmd->callback([&oc, h] {
      resolve(h->ops);
      oc.method = "similarity.greedy";
      oc.inputs = operand_inputs(h->ops);
      oc.inputs["vectors"] = "@" + h->vectors;
      const EmbeddingStore store = load_store_file(h->vectors);
      const TokenizeMode mode = resolve_mode(h->ops);
      const auto rows_of = [&](const std::string& text, const std::string& who) {
        TokenSeq tokens;
        if (mode == TokenizeMode::chars) {
          for (char32_t c : tokenize_chars(text)) tokens.push_back(utf8::encode(c));
        } else if (mode == TokenizeMode::whitespace) {
          tokens = tokenize_whitespace(text);
        } else {
          tokens = tokenize_split(text, h->ops.delim);
        }
        return in_vocab_rows(tokens, store, who);
      };
      const auto score =
          greedy_match_score(rows_of(h->ops.text_a, "operand A"), rows_of(h->ops.text_b, "operand B"));
      oc.result = {{"precision", score.precision}, {"recall", score.recall}, {"f1", score.f1}};
      oc.plain = "precision " + format_number(score.precision) + "\nrecall " +
                 format_number(score.recall) + "\nf1 " + format_number(score.f1);
    });
  }
}

inline void setup_search(CLI::App& app, Outcome& oc) {
  auto* search_cmd = app.add_subcommand("search", "Exact pattern occurrence search");
  search_cmd->fallthrough();
  search_cmd->require_subcommand(1);

  struct SearchOpts {
    std::string pattern, text, file_pattern, file_text;
    std::string mode = "char";
    std::string delim;
    CLI::Option* opt_pattern = nullptr;
    CLI::Option* opt_text = nullptr;
    CLI::Option* opt_file_pattern = nullptr;
    CLI::Option* opt_file_text = nullptr;
    CLI::Option* opt_delim = nullptr;
  };

  const auto add_algo = [&oc, search_cmd](const char* name, const char* desc,
                                          SearchAlgorithm algo) {
    auto* cmd = search_cmd->add_subcommand(name, desc);
    cmd->fallthrough();
    auto h = std::make_shared<SearchOpts>();
    h->opt_pattern = cmd->add_option("--pattern", h->pattern, "Pattern, inline");
    h->opt_file_pattern =
        cmd->add_option("--file-pattern", h->file_pattern, "Read the pattern from a file");
    h->opt_text = cmd->add_option("--text", h->text, "Text to scan, inline");
    h->opt_file_text = cmd->add_option("--file-text", h->file_text, "Read the text from a file");
    cmd->add_option("--mode", h->mode, "Tokenization: char, whitespace, or delim")
        ->check(CLI::IsMember({"char", "whitespace", "delim"}))
        ->capture_default_str();
    h->opt_delim = cmd->add_option("--delim", h->delim, "Token separator for --mode delim");
    cmd->callback([&oc, h, algo, name] {
      const auto [pat, pat_desc] =
          resolve_one(h->opt_pattern, h->opt_file_pattern, h->pattern, h->file_pattern, "pattern");
      const auto [txt, txt_desc] =
          resolve_one(h->opt_text, h->opt_file_text, h->text, h->file_text, "text");
      const bool delim_given = h->opt_delim->count() > 0;
      if (h->mode == "delim" && (!delim_given || h->delim.empty()))
        throw CLI::ValidationError("--mode delim requires a nonempty --delim");
      if (h->mode != "delim" && delim_given)
        throw CLI::ValidationError("--delim is only valid with --mode delim");
      oc.method = std::string("search.") + name;
      oc.inputs = {{"pattern", pat_desc}, {"text", txt_desc}, {"mode", h->mode}};
      if (h->mode == "delim") oc.inputs["delim"] = h->delim;
      const auto finish = [&](const MatchList& offsets) {
        json arr = json::array();
        std::string plain;
        for (std::size_t i = 0; i < offsets.size(); ++i) {
          arr.push_back(offsets[i]);
          if (i > 0) plain += ' ';
          plain += std::to_string(offsets[i]);
        }
        oc.result = std::move(arr);
        oc.plain = std::move(plain);
      };
      if (h->mode == "char") {
        finish(search(tokenize_chars(pat), tokenize_chars(txt), algo));
      } else if (h->mode == "whitespace") {
        finish(search(tokenize_whitespace(pat), tokenize_whitespace(txt), algo));
      } else {
        finish(search(tokenize_split(pat, h->delim), tokenize_split(txt, h->delim), algo));
      }
    });
  };
  add_algo("naive", "Brute-force scan", SearchAlgorithm::naive);
  add_algo("rabin-karp", "Rolling-hash scan with verified hits", SearchAlgorithm::rabin_karp);
  add_algo("boyer-moore", "Bad-character and good-suffix skipping", SearchAlgorithm::boyer_moore);
  add_algo("kmp", "Failure-function scan", SearchAlgorithm::kmp);
}

inline void setup_semsearch(CLI::App& app, Outcome& oc) {
  auto* sem = app.add_subcommand("semsearch", "Semantic vector search over a text corpus");
  sem->fallthrough();
  sem->require_subcommand(1);

  {
    auto* cmd = sem->add_subcommand("build", "Embed a corpus and write an index file");
    cmd->fallthrough();
    struct BuildOpts {
      std::string corpus, corpus_vectors, vectors, out_path;
      std::string pool = "mean", metric = "cosine";
      std::size_t nlist = 0, iters = 15;
      std::uint64_t seed = 42;
      CLI::Option* opt_corpus = nullptr;
      CLI::Option* opt_corpus_vectors = nullptr;
      CLI::Option* opt_vectors = nullptr;
      CLI::Option* opt_seed = nullptr;
    };
    auto h = std::make_shared<BuildOpts>();
    h->opt_corpus =
        cmd->add_option("--corpus", h->corpus, "Text corpus file, one entry per line");
    h->opt_corpus_vectors =
        cmd->add_option("--corpus-vectors", h->corpus_vectors,
                        "Pre-embedded corpus in word-vector format (word = record id)");
    h->opt_vectors =
        cmd->add_option("--vectors", h->vectors, "Word-vector file for embedding corpus lines");
    cmd->add_option("--pool", h->pool, "Token pooling: mean or last")
        ->check(CLI::IsMember({"mean", "last"}))
        ->capture_default_str();
    cmd->add_option("--metric", h->metric, "Scoring metric: cosine or l2")
        ->check(CLI::IsMember({"cosine", "l2"}))
        ->capture_default_str();
    cmd->add_option("--nlist", h->nlist, "IVF posting lists; 0 builds a flat index")
        ->capture_default_str();
    cmd->add_option("--iters", h->iters, "k-means Lloyd iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    h->opt_seed = cmd->add_option("--seed", h->seed, "k-means seed (default: S2S_SEED or 42)");
    cmd->add_option("--out", h->out_path, "Index file to write")->required();
    cmd->callback([&oc, h] {
      const bool from_text = h->opt_corpus->count() > 0;
      const bool from_vectors = h->opt_corpus_vectors->count() > 0;
      if (from_text == from_vectors)
        throw CLI::ValidationError("give exactly one of --corpus or --corpus-vectors");
      if (from_text && h->opt_vectors->count() == 0)
        throw CLI::ValidationError("--corpus requires --vectors");
      const std::uint64_t seed = resolve_seed(h->opt_seed, h->seed);
      const Metric metric = h->metric == "l2" ? Metric::l2 : Metric::cosine;

      std::vector<VectorRecord> records;
      if (from_vectors) {
        std::ifstream in(h->corpus_vectors, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open file: " + h->corpus_vectors);
        const EmbeddingStore store = load_word_vectors(in).store;
        for (const auto& [word, vec] : store.entries)
          records.push_back({word, to_floats(vec)});
      } else {
        const EmbeddingStore store = load_store_file(h->vectors);
        const PoolMode pm = parse_pool(h->pool);
        const auto lines = read_lines(h->corpus);
        for (std::size_t i = 0; i < lines.size(); ++i) {
          const auto rows = in_vocab_rows(tokenize_whitespace(lines[i]), store,
                                          "corpus line " + std::to_string(i + 1));
          records.push_back({std::to_string(i + 1), to_floats(pool(rows, pm))});
        }
      }

      std::size_t n = 0, dim = 0, nlist = 0;
      std::ofstream out_file(h->out_path, std::ios::binary);
      if (!out_file) throw std::runtime_error("cannot open file for writing: " + h->out_path);
      if (h->nlist == 0) {
        const FlatIndex index = flat_build(records, metric);
        save_index(index, out_file);
        n = index.size();
        dim = index.dim;
      } else {
        const IvfIndex index = ivf_build(records, metric, h->nlist, seed, h->iters);
        save_index(index, out_file);
        n = index.size();
        dim = index.dim;
        nlist = index.nlist();
      }
      out_file.flush();
      if (!out_file) throw std::runtime_error("failed writing index: " + h->out_path);

      oc.method = "semsearch.build";
      oc.inputs = {{"corpus", from_text ? "@" + h->corpus : "@" + h->corpus_vectors},
                   {"metric", h->metric},
                   {"pool", h->pool},
                   {"nlist", h->nlist},
                   {"iters", h->iters},
                   {"seed", seed}};
      if (from_text) oc.inputs["vectors"] = "@" + h->vectors;
      oc.result = {{"n", n}, {"E", dim}, {"nlist", nlist}, {"index", h->out_path}};
      oc.plain = "n=" + std::to_string(n) + " E=" + std::to_string(dim) +
                 " nlist=" + std::to_string(nlist);
    });
  }

  {
    auto* cmd = sem->add_subcommand("query", "Rank index records against a text query");
    cmd->fallthrough();
    struct QueryOpts {
      std::string index_path, query, file_query, vectors;
      std::string pool = "mean";
      std::size_t k = 10, nprobe = 1;
      CLI::Option* opt_query = nullptr;
      CLI::Option* opt_file_query = nullptr;
    };
    auto h = std::make_shared<QueryOpts>();
    cmd->add_option("--index", h->index_path, "Index file written by semsearch build")
        ->required();
    h->opt_query = cmd->add_option("--query", h->query, "Query text, inline");
    h->opt_file_query = cmd->add_option("--file-query", h->file_query, "Read the query from a file");
    cmd->add_option("--vectors", h->vectors, "Word-vector file for embedding the query")
        ->required();
    cmd->add_option("--pool", h->pool, "Token pooling: mean or last")
        ->check(CLI::IsMember({"mean", "last"}))
        ->capture_default_str();
    cmd->add_option("--k", h->k, "Neighbors to return")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--nprobe", h->nprobe, "IVF posting lists to scan (ignored by flat indexes)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->callback([&oc, h] {
      const auto [qtext, qdesc] =
          resolve_one(h->opt_query, h->opt_file_query, h->query, h->file_query, "query");
      std::ifstream in(h->index_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open file: " + h->index_path);
      const AnyIndex index = load_index(in);
      const EmbeddingStore store = load_store_file(h->vectors);
      const auto rows = in_vocab_rows(tokenize_whitespace(qtext), store, "query");
      const auto q = to_floats(pool(rows, parse_pool(h->pool)));
      const auto neighbors = query_index(index, q, h->k, h->nprobe);

      oc.method = "semsearch.query";
      oc.inputs = {{"index", "@" + h->index_path},
                   {"vectors", "@" + h->vectors},
                   {"query", qdesc},
                   {"pool", h->pool},
                   {"k", h->k},
                   {"nprobe", h->nprobe}};
      json arr = json::array();
      std::string plain;
      for (std::size_t i = 0; i < neighbors.size(); ++i) {
        arr.push_back({{"id", neighbors[i].id}, {"score", neighbors[i].score}});
        if (i > 0) plain += '\n';
        plain += neighbors[i].id + " " + format_number(neighbors[i].score);
      }
      oc.result = std::move(arr);
      oc.plain = std::move(plain);
    });
  }
}

inline void setup_matrix(CLI::App& app, Outcome& oc) {
  auto* mat = app.add_subcommand("matrix", "Export dynamic-programming score matrices");
  mat->fallthrough();
  mat->require_subcommand(1);

  const auto finish_matrix = [&oc](const ScoreMatrix& m, MatrixFormat fmt, bool labeled,
                                   const std::vector<std::string>& s_labels,
                                   const std::vector<std::string>& t_labels) {
    json jm = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
      jm.push_back(std::move(row));
    }
    oc.result = std::move(jm);
    oc.plain = labeled ? export_matrix(m, fmt, s_labels, t_labels) : export_matrix(m, fmt);
  };

  struct MatrixOpts {
    AlignScoreOpts aln;  // operands + scoring for global/local
    EditCostOpts costs;  // operands + costs for levenshtein/damerau
    std::string format = "csv";
    bool labeled = false;
  };

  const auto add_common = [](CLI::App* cmd, MatrixOpts& h) {
    cmd->add_option("--format", h.format, "csv or tsv")
        ->check(CLI::IsMember({"csv", "tsv"}))
        ->capture_default_str();
    cmd->add_flag("--labeled", h.labeled, "Add sequence symbols as header row/column");
  };

  const auto labels_of = [](const auto& seq) {
    std::vector<std::string> out;
    out.reserve(seq.size());
    for (const auto& sym : seq) out.push_back(symbol_text(sym));
    return out;
  };

  const auto add_aligned = [&oc, mat, add_common, labels_of, finish_matrix](const char* name,
                                                                            const char* desc,
                                                                            bool local) {
    auto* cmd = mat->add_subcommand(name, desc);
    cmd->fallthrough();
    auto h = std::make_shared<MatrixOpts>();
    add_text_operands(cmd, h->aln.ops);
    cmd->add_option("--match", h->aln.match, "Score for equal symbols")->capture_default_str();
    cmd->add_option("--mismatch", h->aln.mismatch, "Score for unequal symbols")
        ->capture_default_str();
    cmd->add_option("--gap", h->aln.gap, "Per-gap penalty")->capture_default_str();
    h->aln.opt_matrix = cmd->add_option("--matrix-file", h->aln.matrix_file,
                                        "Substitution-matrix file providing symbol scores");
    add_common(cmd, *h);
    cmd->callback([&oc, h, local, name, labels_of, finish_matrix] {
      resolve(h->aln.ops);
      oc.method = std::string("matrix.") + name;
      oc.inputs = operand_inputs(h->aln.ops);
      std::optional<SubstitutionMatrix> sub;
      if (h->aln.opt_matrix->count() > 0) {
        std::ifstream in(h->aln.matrix_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open file: " + h->aln.matrix_file);
        sub = parse_substitution_matrix(in);
      }
      const GapPenalty gp{h->aln.gap};
      const MatrixFormat fmt = h->format == "tsv" ? MatrixFormat::tsv : MatrixFormat::csv;
      with_seqs(h->aln.ops, [&](const auto& sa, const auto& sb) {
        const auto run = [&](auto&& scorer) {
          const auto res = local ? local_align(sa, sb, scorer, gp, /*keep_matrix=*/true)
                                 : global_align(sa, sb, scorer, gp, /*keep_matrix=*/true);
          finish_matrix(*res.matrix, fmt, h->labeled, labels_of(sa), labels_of(sb));
        };
        if (sub) {
          run([&](const auto& x, const auto& y) { return (*sub)(x, y); });
        } else {
          run(UniformScoring{h->aln.match, h->aln.mismatch});
        }
      });
    });
  };
  add_aligned("global", "Needleman-Wunsch score matrix", false);
  add_aligned("local", "Smith-Waterman score matrix", true);

  const auto add_edit = [&oc, mat, add_common, labels_of, finish_matrix](const char* name,
                                                                         const char* desc,
                                                                         bool damerau) {
    auto* cmd = mat->add_subcommand(name, desc);
    cmd->fallthrough();
    auto h = std::make_shared<MatrixOpts>();
    add_text_operands(cmd, h->costs.ops);
    add_cost_flags(cmd, h->costs, damerau);
    add_common(cmd, *h);
    cmd->callback([&oc, h, damerau, name, labels_of, finish_matrix] {
      resolve(h->costs.ops);
      oc.method = std::string("matrix.") + name;
      oc.inputs = operand_inputs(h->costs.ops);
      const MatrixFormat fmt = h->format == "tsv" ? MatrixFormat::tsv : MatrixFormat::csv;
      with_seqs(h->costs.ops, [&](const auto& sa, const auto& sb) {
        const auto res = damerau
                             ? damerau_levenshtein(sa, sb, to_cost_model(h->costs),
                                                   DamerauSpace::full)
                             : levenshtein(sa, sb, to_cost_model(h->costs), LevSpace::full);
        finish_matrix(*res.matrix, fmt, h->labeled, labels_of(sa), labels_of(sb));
      });
    });
  };
  add_edit("levenshtein", "Weighted edit-distance matrix", false);
  add_edit("damerau", "OSA edit-distance matrix", true);
}

}  // namespace detail

/// Parses and runs one invocation. `args` excludes the program name.
/// Nothing is written to `out` until the command has fully succeeded.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::json;
  const auto t0 = std::chrono::steady_clock::now();

  detail::Outcome oc;
  std::string output_mode = "plain";

  CLI::App app{"String alignment, distance, similarity, search, and semantic retrieval"};
  app.name("s2s");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--output", output_mode, "Output format: plain or json")
      ->check(CLI::IsMember({"plain", "json"}))
      ->capture_default_str();

  detail::setup_align(app, oc);
  detail::setup_distance(app, oc);
  detail::setup_similarity(app, oc);
  detail::setup_search(app, oc);
  detail::setup_semsearch(app, oc);
  detail::setup_matrix(app, oc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (output_mode == "json") {
    const json j{{"method", oc.method},
                 {"inputs", oc.inputs},
                 {"result", oc.result},
                 {"elapsed_ms", elapsed}};
    out << j.dump() << '\n';
  } else {
    out << oc.plain;
    if (oc.plain.empty() || oc.plain.back() != '\n') out << '\n';
  }
  return 0;
}

}  // namespace s2s::cli
