#pragma once

// Similarity measures: Jaccard, Jaro and Jaro-Winkler, longest-common-
// subsequence similarity, cosine similarity over vectors, and greedy
// per-token embedding matching aggregated into precision/recall/F1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2s/alignment.hpp"
#include "s2s/distance.hpp"

namespace s2s {

/// |set(s) ∩ set(t)| / |set(s) ∪ set(t)|; 1 when both are empty.
/// Complements jaccard_distance exactly.
template <class Seq>
double jaccard_similarity(const Seq& s, const Seq& t) {
  return detail::jaccard_ratio(s, t);
}

/// Jaro similarity: matching symbols within a window of
/// floor(max(n,m)/2) - 1, discounted by half the out-of-order matches.
template <class Seq>
double jaro(const Seq& s, const Seq& t) {
  const std::size_t n = s.size(), m = t.size();
  if (n == 0 && m == 0) return 1.0;
  if (n == 0 || m == 0) return 0.0;

  const std::size_t half = std::max(n, m) / 2;
  const std::size_t window = half > 0 ? half - 1 : 0;
  std::vector<bool> s_matched(n, false), t_matched(m, false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(m, i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!t_matched[j] && s[i] == t[j]) {
        s_matched[i] = true;
        t_matched[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  std::size_t out_of_order = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!s_matched[i]) continue;
    while (!t_matched[k]) ++k;
    if (!(s[i] == t[k])) ++out_of_order;
    ++k;
  }
  const double c = static_cast<double>(matches);
  const double tr = static_cast<double>(out_of_order) / 2.0;
  return (c / static_cast<double>(n) + c / static_cast<double>(m) + (c - tr) / c) / 3.0;
}

/// Jaro with a common-prefix bonus: jaro + l * p * (1 - jaro), prefix
/// length l capped at max_prefix.
template <class Seq>
double jaro_winkler(const Seq& s, const Seq& t, double p = 0.1, std::size_t max_prefix = 4) {
  if (!(p >= 0.0 && p <= 0.25))
    throw std::invalid_argument("jaro_winkler: p must be in [0, 0.25]");
  const double base = jaro(s, t);
  std::size_t prefix = 0;
  const std::size_t limit = std::min({s.size(), t.size(), max_prefix});
  while (prefix < limit && s[prefix] == t[prefix]) ++prefix;
  return base + static_cast<double>(prefix) * p * (1.0 - base);
}

/// |LCS(s,t)| / max(n,m); 1 when both are empty.
template <class Seq>
double lcs_similarity(const Seq& s, const Seq& t) {
  const std::size_t n = s.size(), m = t.size();
  if (n == 0 && m == 0) return 1.0;
  if (n == 0 || m == 0) return 0.0;
  const auto lcs = longest_common_subsequence(s, t);
  return static_cast<double>(lcs.length) / static_cast<double>(std::max(n, m));
}

/// Cosine of the angle between two equal-dimension nonzero vectors, clamped
/// to [-1, 1] against rounding.
template <class VecU, class VecV>
double cosine_similarity(const VecU& u, const VecV& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("cosine_similarity: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
  if (u.size() == 0) throw std::invalid_argument("cosine_similarity: vectors must be nonempty");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = static_cast<double>(u[i]);
    const double b = static_cast<double>(v[i]);
    dot += a * b;
    nu += a * a;
    nv += b * b;
  }
  if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine_similarity: zero vector");
  return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

/// Precision/recall/F1 from greedy max-cosine token matching. Averages are
/// clamped into [0, 1]; embeddings with negative average similarity floor
/// at 0.
struct GreedyMatchScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// a: n reference token embeddings, b: m candidate token embeddings, all of
/// one dimension E. recall averages max-cosine over a's rows, precision
/// over b's rows.
template <class Mat>
GreedyMatchScore greedy_match_score(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0)
    throw std::invalid_argument("greedy_match_score: embedding matrices must be nonempty");
  const std::size_t dim = a[0].size();

  const auto norm_of = [dim](const auto& row) {
    if (row.size() != dim)
      throw std::invalid_argument("greedy_match_score: ragged embedding dimensions");
    double nn = 0.0;
    for (std::size_t e = 0; e < dim; ++e) {
      const double x = static_cast<double>(row[e]);
      nn += x * x;
    }
    if (nn == 0.0) throw std::invalid_argument("greedy_match_score: zero embedding row");
    return std::sqrt(nn);
  };

  std::vector<double> norm_a(n), norm_b(m);
  for (std::size_t i = 0; i < n; ++i) norm_a[i] = norm_of(a[i]);
  for (std::size_t j = 0; j < m; ++j) norm_b[j] = norm_of(b[j]);

  std::vector<double> best_a(n, -2.0), best_b(m, -2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0.0;
      for (std::size_t e = 0; e < dim; ++e)
        dot += static_cast<double>(a[i][e]) * static_cast<double>(b[j][e]);
      const double cos = std::clamp(dot / (norm_a[i] * norm_b[j]), -1.0, 1.0);
      best_a[i] = std::max(best_a[i], cos);
      best_b[j] = std::max(best_b[j], cos);
    }
  }

  double recall = 0.0, precision = 0.0;
  for (double v : best_a) recall += v;
  for (double v : best_b) precision += v;
  recall = std::clamp(recall / static_cast<double>(n), 0.0, 1.0);
  precision = std::clamp(precision / static_cast<double>(m), 0.0, 1.0);

  GreedyMatchScore score;
  score.precision = precision;
  score.recall = recall;
  score.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  return score;
}

}  // namespace s2s
