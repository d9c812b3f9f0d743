#pragma once

// Pairwise alignment suite: global (Needleman-Wunsch) and local
// (Smith-Waterman) alignment, linear-space global alignment (Hirschberg),
// longest common substring/subsequence, and dynamic time warping with a
// linear-space divide-and-conquer variant.
//
// All functions are templates over the sequence type; any random-access
// container of equality-comparable symbols works (std::u32string,
// std::vector<std::string>, std::string, std::vector<int>, ...).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "s2s/core.hpp"
#include "s2s/probe.hpp"

namespace s2s {

/// Pair of aligned rows of equal length; std::nullopt marks a gap. No
/// column holds a gap in both rows.
template <class Sym>
struct AlignmentResult {
  std::vector<std::optional<Sym>> aligned_a;
  std::vector<std::optional<Sym>> aligned_b;
  double score = 0.0;
  std::optional<ScoreMatrix> matrix;
};

// ---------------------------------------------------------------------------
// Global alignment (Needleman-Wunsch)

// Traceback tie-break everywhere: diagonal, then up (gap in the second row),
// then left (gap in the first row).
template <class Seq, class Scorer>
AlignmentResult<typename Seq::value_type> global_align(const Seq& s, const Seq& t, Scorer&& score,
                                                       GapPenalty gap, bool keep_matrix = false) {
  using Sym = typename Seq::value_type;
  gap.validate();
  const std::size_t n = s.size(), m = t.size();
  const double g = gap.per_gap;

  ScoreMatrix h(n + 1, m + 1);
  for (std::size_t i = 1; i <= n; ++i) h.at(i, 0) = h.at(i - 1, 0) + g;
  for (std::size_t j = 1; j <= m; ++j) h.at(0, j) = h.at(0, j - 1) + g;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      h.at(i, j) = detail::max3(h.at(i - 1, j - 1) + score(s[i - 1], t[j - 1]),
                                h.at(i - 1, j) + g, h.at(i, j - 1) + g);
    }
  }

  AlignmentResult<Sym> result;
  result.score = h.at(n, m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && h.at(i, j) == h.at(i - 1, j - 1) + score(s[i - 1], t[j - 1])) {
      result.aligned_a.emplace_back(s[i - 1]);
      result.aligned_b.emplace_back(t[j - 1]);
      --i, --j;
    } else if (i > 0 && h.at(i, j) == h.at(i - 1, j) + g) {
      result.aligned_a.emplace_back(s[i - 1]);
      result.aligned_b.emplace_back(std::nullopt);
      --i;
    } else {
      result.aligned_a.emplace_back(std::nullopt);
      result.aligned_b.emplace_back(t[j - 1]);
      --j;
    }
  }
  std::reverse(result.aligned_a.begin(), result.aligned_a.end());
  std::reverse(result.aligned_b.begin(), result.aligned_b.end());
  if (keep_matrix) result.matrix = std::move(h);
  return result;
}

// ---------------------------------------------------------------------------
// Hirschberg linear-space global alignment

namespace detail {

// Last NW score row for s[si..si+sn) vs t[ti..ti+tn). When reversed, both
// ranges are read back to front, giving suffix scores.
template <class Seq, class Scorer>
void nw_score_row(const Seq& s, std::size_t si, std::size_t sn, const Seq& t, std::size_t ti,
                  std::size_t tn, Scorer& score, double g, bool reversed,
                  TrackedBuffer<double>& row) {
  const auto sym_s = [&](std::size_t i) -> decltype(auto) {
    return reversed ? s[si + sn - 1 - i] : s[si + i];
  };
  const auto sym_t = [&](std::size_t j) -> decltype(auto) {
    return reversed ? t[ti + tn - 1 - j] : t[ti + j];
  };
  row[0] = 0.0;
  for (std::size_t j = 1; j <= tn; ++j) row[j] = row[j - 1] + g;
  for (std::size_t i = 0; i < sn; ++i) {
    double diag = row[0];
    row[0] += g;
    for (std::size_t j = 1; j <= tn; ++j) {
      double up = row[j];
      double best = max3(diag + score(sym_s(i), sym_t(j - 1)), up + g, row[j - 1] + g);
      diag = up;
      row[j] = best;
    }
  }
}

// Base case: aligns the single symbol s[si] against t[ti..ti+tn) with a
// 2 x (tn+1) DP so tie-breaking matches the full matrix.
template <class Seq, class Scorer, class Sym>
void hirschberg_single_row(const Seq& s, std::size_t si, const Seq& t, std::size_t ti,
                           std::size_t tn, Scorer& score, double g,
                           std::vector<std::optional<Sym>>& out_a,
                           std::vector<std::optional<Sym>>& out_b) {
  TrackedBuffer<double> top(tn + 1), bottom(tn + 1);
  top[0] = 0.0;
  for (std::size_t j = 1; j <= tn; ++j) top[j] = top[j - 1] + g;
  bottom[0] = g;
  for (std::size_t j = 1; j <= tn; ++j)
    bottom[j] = max3(top[j - 1] + score(s[si], t[ti + j - 1]), top[j] + g, bottom[j - 1] + g);

  std::size_t j = tn;
  bool consumed_s = false;
  std::vector<std::optional<Sym>> rev_a, rev_b;
  while (j > 0 || !consumed_s) {
    if (!consumed_s && j > 0 && bottom[j] == top[j - 1] + score(s[si], t[ti + j - 1])) {
      rev_a.emplace_back(s[si]);
      rev_b.emplace_back(t[ti + j - 1]);
      consumed_s = true;
      --j;
    } else if (!consumed_s && bottom[j] == top[j] + g) {
      rev_a.emplace_back(s[si]);
      rev_b.emplace_back(std::nullopt);
      consumed_s = true;
    } else {
      rev_a.emplace_back(std::nullopt);
      rev_b.emplace_back(t[ti + j - 1]);
      --j;
    }
  }
  out_a.insert(out_a.end(), rev_a.rbegin(), rev_a.rend());
  out_b.insert(out_b.end(), rev_b.rbegin(), rev_b.rend());
}

template <class Seq, class Scorer, class Sym>
void hirschberg_rec(const Seq& s, std::size_t si, std::size_t sn, const Seq& t, std::size_t ti,
                    std::size_t tn, Scorer& score, double g,
                    std::vector<std::optional<Sym>>& out_a,
                    std::vector<std::optional<Sym>>& out_b) {
  if (sn == 0) {
    for (std::size_t j = 0; j < tn; ++j) {
      out_a.emplace_back(std::nullopt);
      out_b.emplace_back(t[ti + j]);
    }
    return;
  }
  if (tn == 0) {
    for (std::size_t i = 0; i < sn; ++i) {
      out_a.emplace_back(s[si + i]);
      out_b.emplace_back(std::nullopt);
    }
    return;
  }
  if (sn == 1) {
    hirschberg_single_row(s, si, t, ti, tn, score, g, out_a, out_b);
    return;
  }

  const std::size_t half = sn / 2;
  std::size_t split = 0;
  {
    TrackedBuffer<double> fwd(tn + 1), bwd(tn + 1);
    nw_score_row(s, si, half, t, ti, tn, score, g, false, fwd);
    nw_score_row(s, si + half, sn - half, t, ti, tn, score, g, true, bwd);
    double best = fwd[0] + bwd[tn];
    for (std::size_t j = 1; j <= tn; ++j) {
      double v = fwd[j] + bwd[tn - j];
      if (v > best) {
        best = v;
        split = j;
      }
    }
  }
  hirschberg_rec(s, si, half, t, ti, split, score, g, out_a, out_b);
  hirschberg_rec(s, si + half, sn - half, t, ti + split, tn - split, score, g, out_a, out_b);
}

}  // namespace detail

/// Optimal global alignment in O(m) space. The score equals global_align's
/// exactly; the alignment is some optimal alignment, not necessarily the
/// same traceback.
template <class Seq, class Scorer>
AlignmentResult<typename Seq::value_type> hirschberg_align(const Seq& s, const Seq& t,
                                                           Scorer&& score, GapPenalty gap) {
  using Sym = typename Seq::value_type;
  gap.validate();
  AlignmentResult<Sym> result;
  detail::hirschberg_rec(s, 0, s.size(), t, 0, t.size(), score, gap.per_gap, result.aligned_a,
                         result.aligned_b);
  double total = 0.0;
  for (std::size_t k = 0; k < result.aligned_a.size(); ++k) {
    if (!result.aligned_a[k] || !result.aligned_b[k])
      total += gap.per_gap;
    else
      total += score(*result.aligned_a[k], *result.aligned_b[k]);
  }
  result.score = total;
  return result;
}

// ---------------------------------------------------------------------------
// Local alignment (Smith-Waterman)

/// Best-scoring alignment of any substring pair, scores floored at zero.
/// Reports one alignment: the highest-scoring cell, first in row-major
/// order on ties, traced back to the first zero.
template <class Seq, class Scorer>
AlignmentResult<typename Seq::value_type> local_align(const Seq& s, const Seq& t, Scorer&& score,
                                                      GapPenalty gap, bool keep_matrix = false) {
  using Sym = typename Seq::value_type;
  gap.validate();
  const std::size_t n = s.size(), m = t.size();
  const double g = gap.per_gap;

  ScoreMatrix h(n + 1, m + 1);
  double best = 0.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double v = detail::max3(h.at(i - 1, j - 1) + score(s[i - 1], t[j - 1]), h.at(i - 1, j) + g,
                              h.at(i, j - 1) + g);
      v = std::max(0.0, v);
      h.at(i, j) = v;
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  }

  AlignmentResult<Sym> result;
  result.score = best;
  if (best > 0.0) {
    std::size_t i = bi, j = bj;
    while (h.at(i, j) != 0.0) {
      if (i > 0 && j > 0 && h.at(i, j) == h.at(i - 1, j - 1) + score(s[i - 1], t[j - 1])) {
        result.aligned_a.emplace_back(s[i - 1]);
        result.aligned_b.emplace_back(t[j - 1]);
        --i, --j;
      } else if (i > 0 && h.at(i, j) == h.at(i - 1, j) + g) {
        result.aligned_a.emplace_back(s[i - 1]);
        result.aligned_b.emplace_back(std::nullopt);
        --i;
      } else {
        result.aligned_a.emplace_back(std::nullopt);
        result.aligned_b.emplace_back(t[j - 1]);
        --j;
      }
    }
    std::reverse(result.aligned_a.begin(), result.aligned_a.end());
    std::reverse(result.aligned_b.begin(), result.aligned_b.end());
  }
  if (keep_matrix) result.matrix = std::move(h);
  return result;
}

// ---------------------------------------------------------------------------
// Longest common substring / subsequence

template <class Sym>
struct CommonSubstringResult {
  std::size_t length = 0;
  std::vector<std::vector<Sym>> witnesses;  // all distinct runs of maximal length
};

template <class Seq>
CommonSubstringResult<typename Seq::value_type> longest_common_substring(const Seq& s,
                                                                         const Seq& t) {
  using Sym = typename Seq::value_type;
  const std::size_t n = s.size(), m = t.size();
  CommonSubstringResult<Sym> result;
  if (n == 0 || m == 0) return result;

  std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
  std::vector<std::size_t> ends;  // end positions in s (exclusive) of maximal runs
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (s[i - 1] == t[j - 1]) {
        cur[j] = prev[j - 1] + 1;
        if (cur[j] > result.length) {
          result.length = cur[j];
          ends.clear();
          ends.push_back(i);
        } else if (cur[j] == result.length) {
          ends.push_back(i);
        }
      } else {
        cur[j] = 0;
      }
    }
    std::swap(prev, cur);
  }
  for (std::size_t end : ends) {
    std::vector<Sym> run(s.begin() + (end - result.length), s.begin() + end);
    if (std::find(result.witnesses.begin(), result.witnesses.end(), run) == result.witnesses.end())
      result.witnesses.push_back(std::move(run));
  }
  return result;
}

template <class Sym>
struct CommonSubsequenceResult {
  std::size_t length = 0;
  std::vector<Sym> witness;
};

template <class Seq>
CommonSubsequenceResult<typename Seq::value_type> longest_common_subsequence(const Seq& s,
                                                                             const Seq& t) {
  using Sym = typename Seq::value_type;
  const std::size_t n = s.size(), m = t.size();
  std::vector<std::vector<std::uint32_t>> len(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (s[i - 1] == t[j - 1])
        len[i][j] = len[i - 1][j - 1] + 1;
      else
        len[i][j] = std::max(len[i - 1][j], len[i][j - 1]);
    }
  }
  CommonSubsequenceResult<Sym> result;
  result.length = len[n][m];
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    if (s[i - 1] == t[j - 1]) {
      result.witness.push_back(s[i - 1]);
      --i, --j;
    } else if (len[i - 1][j] >= len[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.witness.begin(), result.witness.end());
  return result;
}

// ---------------------------------------------------------------------------
// Dynamic time warping

/// Monotone, contiguous warp path from (0,0) to (n-1,m-1); consecutive
/// steps differ by (1,0), (0,1), or (1,1).
struct WarpResult {
  std::vector<std::pair<std::size_t, std::size_t>> path;
  double total_cost = 0.0;
};

enum class DtwSpace { full, linear };

/// |a - b| over arithmetic values.
struct AbsCost {
  template <class T>
  double operator()(const T& a, const T& b) const {
    return a < b ? static_cast<double>(b) - static_cast<double>(a)
                 : static_cast<double>(a) - static_cast<double>(b);
  }
};

/// 0/1 mismatch indicator over arbitrary symbols.
struct IndicatorCost {
  template <class T>
  double operator()(const T& a, const T& b) const {
    return a == b ? 0.0 : 1.0;
  }
};

namespace detail {

template <class Seq, class CostFn>
WarpResult dtw_full(const Seq& s, const Seq& t, CostFn& cost) {
  const std::size_t n = s.size(), m = t.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(m, 0.0));
  d[0][0] = cost(s[0], t[0]);
  for (std::size_t j = 1; j < m; ++j) d[0][j] = d[0][j - 1] + cost(s[0], t[j]);
  for (std::size_t i = 1; i < n; ++i) {
    d[i][0] = d[i - 1][0] + cost(s[i], t[0]);
    for (std::size_t j = 1; j < m; ++j)
      d[i][j] = cost(s[i], t[j]) + min3(d[i - 1][j - 1], d[i - 1][j], d[i][j - 1]);
  }

  WarpResult result;
  result.total_cost = d[n - 1][m - 1];
  std::size_t i = n - 1, j = m - 1;
  result.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      double via_diag = d[i - 1][j - 1], via_up = d[i - 1][j], via_left = d[i][j - 1];
      double best = min3(via_diag, via_up, via_left);
      if (via_diag == best)
        --i, --j;
      else if (via_up == best)
        --i;
      else
        --j;
    } else if (i > 0) {
      --i;
    } else {
      --j;
    }
    result.path.emplace_back(i, j);
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

// Forward costs within the rectangle [i0..r] x [j0..j1]: out[j - j0] is the
// cheapest path cost (i0,j0) -> (r,j), including both endpoint cells.
template <class Seq, class CostFn>
void dtw_forward_row(const Seq& s, const Seq& t, CostFn& cost, std::size_t i0, std::size_t j0,
                     std::size_t r, std::size_t j1, TrackedBuffer<double>& out) {
  const std::size_t w = j1 - j0 + 1;
  out[0] = cost(s[i0], t[j0]);
  for (std::size_t j = 1; j < w; ++j) out[j] = out[j - 1] + cost(s[i0], t[j0 + j]);
  for (std::size_t i = i0 + 1; i <= r; ++i) {
    double diag = out[0];
    out[0] += cost(s[i], t[j0]);
    for (std::size_t j = 1; j < w; ++j) {
      double up = out[j];
      out[j] = cost(s[i], t[j0 + j]) + min3(diag, up, out[j - 1]);
      diag = up;
    }
  }
}

// Backward costs within [rb..i1] x [j0..j1]: out[j - j0] is the cheapest
// path cost (rb,j) -> (i1,j1).
template <class Seq, class CostFn>
void dtw_backward_row(const Seq& s, const Seq& t, CostFn& cost, std::size_t rb, std::size_t j0,
                      std::size_t i1, std::size_t j1, TrackedBuffer<double>& out) {
  const std::size_t w = j1 - j0 + 1;
  out[w - 1] = cost(s[i1], t[j1]);
  for (std::size_t j = w - 1; j-- > 0;) out[j] = out[j + 1] + cost(s[i1], t[j0 + j]);
  for (std::size_t i = i1; i-- > rb;) {
    double diag = out[w - 1];  // old value below-right of the cell being written
    out[w - 1] += cost(s[i], t[j1]);
    for (std::size_t j = w - 1; j-- > 0;) {
      double down = out[j];
      out[j] = cost(s[i], t[j0 + j]) + min3(diag, down, out[j + 1]);
      diag = down;
    }
  }
}

template <class Seq, class CostFn>
void dtw_linear_rec(const Seq& s, const Seq& t, CostFn& cost, std::size_t i0, std::size_t j0,
                    std::size_t i1, std::size_t j1,
                    std::vector<std::pair<std::size_t, std::size_t>>& path) {
  if (i0 == i1) {
    for (std::size_t j = j0; j <= j1; ++j) path.emplace_back(i0, j);
    return;
  }
  const std::size_t r = i0 + (i1 - i0 - 1) / 2;  // path crosses between rows r and r+1
  std::size_t cross_j = j0, next_j = j0;
  {
    TrackedBuffer<double> fwd(j1 - j0 + 1), bwd(j1 - j0 + 1);
    dtw_forward_row(s, t, cost, i0, j0, r, j1, fwd);
    dtw_backward_row(s, t, cost, r + 1, j0, i1, j1, bwd);
    bool found = false;
    double best = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) {
      double down = fwd[j - j0] + bwd[j - j0];
      if (!found || down < best) {
        best = down;
        cross_j = j;
        next_j = j;
        found = true;
      }
      if (j < j1) {
        double diag = fwd[j - j0] + bwd[j + 1 - j0];
        if (diag < best) {
          best = diag;
          cross_j = j;
          next_j = j + 1;
        }
      }
    }
  }
  dtw_linear_rec(s, t, cost, i0, j0, r, cross_j, path);
  dtw_linear_rec(s, t, cost, r + 1, next_j, i1, j1, path);
}

}  // namespace detail

/// Minimal-cost warp path between two nonempty sequences. Linear mode
/// returns the identical total cost while holding O(m) DP cells.
template <class Seq, class CostFn>
WarpResult dtw(const Seq& s, const Seq& t, CostFn&& cost, DtwSpace space = DtwSpace::full) {
  if (s.size() == 0 || t.size() == 0) throw std::invalid_argument("dtw: sequences must be nonempty");
  if (space == DtwSpace::full) return detail::dtw_full(s, t, cost);

  WarpResult result;
  detail::dtw_linear_rec(s, t, cost, 0, 0, s.size() - 1, t.size() - 1, result.path);
  for (const auto& [i, j] : result.path) result.total_cost += cost(s[i], t[j]);
  return result;
}

}  // namespace s2s
