#pragma once

// Shared helpers for the test suite: fixture paths, deterministic random
// input generators, and small utilities for checking alignment outputs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "s2s/core.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
#ifdef S2S_TEST_FIXTURE_DIR
  return std::string(S2S_TEST_FIXTURE_DIR) + "/" + name;
#else
  return "tests/fixtures/" + name;
#endif
}

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi] drawn without std::uniform_int_distribution
/// so sequences are identical across standard library implementations.
inline std::uint64_t draw(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

inline std::string random_string(Rng& rng, std::size_t max_len, const std::string& alphabet,
                                 std::optional<std::size_t> exact_len = {}) {
  const std::size_t len = exact_len ? *exact_len : draw(rng, 0, max_len);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(alphabet[draw(rng, 0, alphabet.size() - 1)]);
  return out;
}

inline s2s::CharSeq random_char_seq(Rng& rng, std::size_t max_len, const std::string& alphabet) {
  return s2s::tokenize_chars(random_string(rng, max_len, alphabet));
}

inline std::vector<double> random_int_series(Rng& rng, std::size_t max_len, int lo, int hi,
                                             std::size_t min_len = 1) {
  const std::size_t len = draw(rng, min_len, max_len);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i)
    out[i] = static_cast<double>(static_cast<long long>(draw(rng, 0, static_cast<std::uint64_t>(hi - lo))) + lo);
  return out;
}

/// All strings over `alphabet` with length <= max_len, shortest first.
inline std::vector<std::string> all_strings_up_to(std::size_t max_len, const std::string& alphabet) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : alphabet) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

/// Removes gap columns from one side of an alignment.
template <class Sym>
std::vector<Sym> strip_gaps(const std::vector<std::optional<Sym>>& row) {
  std::vector<Sym> out;
  for (const auto& cell : row)
    if (cell) out.push_back(*cell);
  return out;
}

template <class Seq, class Sym = typename Seq::value_type>
bool equals_seq(const Seq& seq, const std::vector<Sym>& symbols) {
  return std::equal(seq.begin(), seq.end(), symbols.begin(), symbols.end());
}

/// Recomputes an alignment's score from its rows; also validates that no
/// column pairs two gaps.
template <class Sym, class Scorer>
double recompute_alignment_score(const std::vector<std::optional<Sym>>& a,
                                 const std::vector<std::optional<Sym>>& b, Scorer&& score,
                                 double gap_penalty, bool* well_formed = nullptr) {
  if (well_formed) *well_formed = true;
  if (a.size() != b.size()) {
    if (well_formed) *well_formed = false;
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) {
      total += score(*a[i], *b[i]);
    } else if (a[i] || b[i]) {
      total += gap_penalty;
    } else if (well_formed) {
      *well_formed = false;
    }
  }
  return total;
}

}  // namespace testutil
