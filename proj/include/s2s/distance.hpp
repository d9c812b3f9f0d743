#pragma once

// Dissimilarity measures: weighted Levenshtein (full and two-row),
// Hamming, Damerau-Levenshtein in its optimal-string-alignment form, and
// Jaccard distance over symbol sets.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "s2s/core.hpp"
#include "s2s/probe.hpp"

namespace s2s {

struct DistanceOutput {
  double value = 0.0;
  std::optional<ScoreMatrix> matrix;  // full-space modes only
};

enum class LevSpace { full, two_row };
enum class DamerauSpace { full, reduced };

namespace detail {

template <class Seq>
double jaccard_ratio(const Seq& s, const Seq& t) {
  using Sym = typename Seq::value_type;
  std::unordered_set<Sym> set_s(s.begin(), s.end());
  std::unordered_set<Sym> set_t(t.begin(), t.end());
  if (set_s.empty() && set_t.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& sym : set_s) common += set_t.count(sym);
  const std::size_t unions = set_s.size() + set_t.size() - common;
  return static_cast<double>(common) / static_cast<double>(unions);
}

}  // namespace detail

/// Minimum total cost of an edit script converting s into t. two_row mode
/// returns the identical value while holding two DP rows.
template <class Seq>
DistanceOutput levenshtein(const Seq& s, const Seq& t, const CostModel& costs = {},
                           LevSpace space = LevSpace::full) {
  costs.validate();
  const std::size_t n = s.size(), m = t.size();
  const double ins = costs.insert_cost, del = costs.delete_cost;
  const double sub = costs.substitute_cost, match = costs.match_cost;

  if (space == LevSpace::full) {
    ScoreMatrix d(n + 1, m + 1);
    for (std::size_t i = 1; i <= n; ++i) d.at(i, 0) = d.at(i - 1, 0) + del;
    for (std::size_t j = 1; j <= m; ++j) d.at(0, j) = d.at(0, j - 1) + ins;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= m; ++j) {
        d.at(i, j) = detail::min3(d.at(i - 1, j) + del, d.at(i, j - 1) + ins,
                                  d.at(i - 1, j - 1) + (s[i - 1] == t[j - 1] ? match : sub));
      }
    }
    DistanceOutput out;
    out.value = d.at(n, m);
    out.matrix = std::move(d);
    return out;
  }

  detail::TrackedBuffer<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + ins;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0] + del;
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = detail::min3(prev[j] + del, cur[j - 1] + ins,
                            prev[j - 1] + (s[i - 1] == t[j - 1] ? match : sub));
    }
    prev.swap(cur);
  }
  return DistanceOutput{prev[m], std::nullopt};
}

/// Number of positions at which two equal-length sequences differ.
template <class Seq>
DistanceOutput hamming(const Seq& s, const Seq& t) {
  if (s.size() != t.size())
    throw std::invalid_argument("hamming: sequences must have equal length (got " +
                                std::to_string(s.size()) + " and " + std::to_string(t.size()) + ")");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!(s[i] == t[i])) ++mismatches;
  return DistanceOutput{static_cast<double>(mismatches), std::nullopt};
}

/// Optimal-string-alignment variant: Levenshtein plus adjacent
/// transpositions, no substring edited twice. reduced mode holds three DP
/// rows and returns the identical value.
template <class Seq>
DistanceOutput damerau_levenshtein(const Seq& s, const Seq& t, const CostModel& costs = {},
                                   DamerauSpace space = DamerauSpace::full) {
  costs.validate();
  const std::size_t n = s.size(), m = t.size();
  const double ins = costs.insert_cost, del = costs.delete_cost;
  const double sub = costs.substitute_cost, match = costs.match_cost;
  const double tr = costs.transpose_cost;

  const auto transposed = [&](std::size_t i, std::size_t j) {
    return i >= 2 && j >= 2 && s[i - 1] == t[j - 2] && s[i - 2] == t[j - 1];
  };

  if (space == DamerauSpace::full) {
    ScoreMatrix d(n + 1, m + 1);
    for (std::size_t i = 1; i <= n; ++i) d.at(i, 0) = d.at(i - 1, 0) + del;
    for (std::size_t j = 1; j <= m; ++j) d.at(0, j) = d.at(0, j - 1) + ins;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= m; ++j) {
        double v = detail::min3(d.at(i - 1, j) + del, d.at(i, j - 1) + ins,
                                d.at(i - 1, j - 1) + (s[i - 1] == t[j - 1] ? match : sub));
        if (transposed(i, j)) v = std::min(v, d.at(i - 2, j - 2) + tr);
        d.at(i, j) = v;
      }
    }
    DistanceOutput out;
    out.value = d.at(n, m);
    out.matrix = std::move(d);
    return out;
  }

  detail::TrackedBuffer<double> two_up(m + 1), prev(m + 1), cur(m + 1);
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + ins;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0] + del;
    for (std::size_t j = 1; j <= m; ++j) {
      double v = detail::min3(prev[j] + del, cur[j - 1] + ins,
                              prev[j - 1] + (s[i - 1] == t[j - 1] ? match : sub));
      if (transposed(i, j)) v = std::min(v, two_up[j - 2] + tr);
      cur[j] = v;
    }
    two_up.swap(prev);
    prev.swap(cur);
  }
  return DistanceOutput{prev[m], std::nullopt};
}

/// 1 - |set(s) ∩ set(t)| / |set(s) ∪ set(t)|; 0 when both are empty.
template <class Seq>
DistanceOutput jaccard_distance(const Seq& s, const Seq& t) {
  return DistanceOutput{1.0 - detail::jaccard_ratio(s, t), std::nullopt};
}

}  // namespace s2s
