#pragma once

// Exact pattern matching: naive scan, Rabin-Karp (verified rolling hash),
// Boyer-Moore (bad-character + good-suffix), and Knuth-Morris-Pratt.
// All algorithms return every occurrence, overlaps included, as sorted
// 0-based offsets in symbol units.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace s2s {

using MatchList = std::vector<std::size_t>;

enum class SearchAlgorithm { naive, rabin_karp, boyer_moore, kmp };

/// Scan-phase instrumentation; KMP guarantees scan_comparisons <= 2 * |text|.
struct SearchStats {
  std::size_t scan_comparisons = 0;
};

/// FNV-1a 64-bit hash over a token's bytes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Stable 64-bit symbol fingerprints feeding the Rabin-Karp rolling hash:
/// characters map to their code point, tokens to FNV-1a 64 of their bytes.
inline std::uint64_t fingerprint64(char32_t c) { return static_cast<std::uint64_t>(c); }
inline std::uint64_t fingerprint64(char c) {
  return static_cast<std::uint64_t>(static_cast<unsigned char>(c));
}
inline std::uint64_t fingerprint64(const std::string& token) { return fnv1a64(token); }

namespace detail {

constexpr std::uint64_t kRkMod = (1ULL << 61) - 1;
constexpr std::uint64_t kRkBase = 257;

inline std::uint64_t rk_mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kRkMod);
}

inline std::uint64_t rk_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s >= kRkMod) s -= kRkMod;
  return s;
}

inline std::uint64_t rk_sub(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + kRkMod - b;
}

template <class Seq>
void require_pattern(const Seq& pattern) {
  if (pattern.size() == 0) throw std::invalid_argument("search: pattern must be nonempty");
}

}  // namespace detail

template <class Seq>
MatchList naive_search(const Seq& pattern, const Seq& text) {
  detail::require_pattern(pattern);
  const std::size_t m = pattern.size(), n = text.size();
  MatchList out;
  if (n < m) return out;
  for (std::size_t i = 0; i + m <= n; ++i) {
    std::size_t j = 0;
    while (j < m && pattern[j] == text[i + j]) ++j;
    if (j == m) out.push_back(i);
  }
  return out;
}

/// Rolling polynomial hash, base 257 mod 2^61-1, over symbol fingerprints.
/// Every hash hit is verified symbol-by-symbol, so no false positives.
template <class Seq>
MatchList rabin_karp_search(const Seq& pattern, const Seq& text) {
  using namespace detail;
  require_pattern(pattern);
  const std::size_t m = pattern.size(), n = text.size();
  MatchList out;
  if (n < m) return out;

  const auto fp = [](const auto& sym) { return fingerprint64(sym) % kRkMod; };
  std::uint64_t hp = 0, ht = 0, high = 1;  // high = base^(m-1)
  for (std::size_t i = 0; i < m; ++i) {
    hp = rk_add(rk_mul(hp, kRkBase), fp(pattern[i]));
    ht = rk_add(rk_mul(ht, kRkBase), fp(text[i]));
    if (i + 1 < m) high = rk_mul(high, kRkBase);
  }
  for (std::size_t i = 0;; ++i) {
    if (ht == hp) {
      std::size_t j = 0;
      while (j < m && pattern[j] == text[i + j]) ++j;
      if (j == m) out.push_back(i);
    }
    if (i + m >= n) break;
    ht = rk_sub(ht, rk_mul(fp(text[i]), high));
    ht = rk_add(rk_mul(ht, kRkBase), fp(text[i + m]));
  }
  return out;
}

template <class Seq>
MatchList boyer_moore_search(const Seq& pattern, const Seq& text) {
  detail::require_pattern(pattern);
  using Sym = std::decay_t<decltype(pattern[0])>;
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(pattern.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(text.size());
  MatchList out;
  if (n < m) return out;

  // Bad-character rule: rightmost occurrence of each symbol among the first
  // m-1 positions, as a map so token alphabets need no dense table.
  std::map<Sym, std::ptrdiff_t> bad_char;
  for (std::ptrdiff_t i = 0; i + 1 < m; ++i) bad_char[pattern[i]] = m - 1 - i;
  const auto bc_shift = [&](const Sym& sym) {
    const auto it = bad_char.find(sym);
    return it == bad_char.end() ? m : it->second;
  };

  // Strong good-suffix rule via the suffix-length table.
  std::vector<std::ptrdiff_t> suff(m);
  suff[m - 1] = m;
  for (std::ptrdiff_t i = m - 2, f = 0, g = m - 1; i >= 0; --i) {
    if (i > g && suff[i + m - 1 - f] < i - g) {
      suff[i] = suff[i + m - 1 - f];
    } else {
      if (i < g) g = i;
      f = i;
      while (g >= 0 && pattern[g] == pattern[g + m - 1 - f]) --g;
      suff[i] = f - g;
    }
  }
  std::vector<std::ptrdiff_t> good_suffix(m, m);
  for (std::ptrdiff_t i = m - 1, j = 0; i >= -1; --i) {
    if (i == -1 || suff[i] == i + 1) {
      for (; j < m - 1 - i; ++j)
        if (good_suffix[j] == m) good_suffix[j] = m - 1 - i;
    }
  }
  for (std::ptrdiff_t i = 0; i <= m - 2; ++i) good_suffix[m - 1 - suff[i]] = m - 1 - i;

  std::ptrdiff_t j = 0;
  while (j <= n - m) {
    std::ptrdiff_t i = m - 1;
    while (i >= 0 && pattern[i] == text[i + j]) --i;
    if (i < 0) {
      out.push_back(static_cast<std::size_t>(j));
      j += good_suffix[0];
    } else {
      j += std::max(good_suffix[i], bc_shift(text[i + j]) - m + 1 + i);
    }
  }
  return out;
}

/// f[i] = length of the longest proper prefix of pattern[0..i] that is also
/// a suffix of it.
template <class Seq>
std::vector<std::size_t> failure_function(const Seq& pattern) {
  detail::require_pattern(pattern);
  std::vector<std::size_t> f(pattern.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    while (k > 0 && !(pattern[k] == pattern[i])) k = f[k - 1];
    if (pattern[k] == pattern[i]) ++k;
    f[i] = k;
  }
  return f;
}

/// Scan phase performs at most 2 * |text| symbol comparisons: every failed
/// comparison shrinks the matched prefix, which grows at most once per text
/// symbol.
template <class Seq>
MatchList kmp_search(const Seq& pattern, const Seq& text, SearchStats* stats = nullptr) {
  const auto f = failure_function(pattern);
  const std::size_t m = pattern.size(), n = text.size();
  MatchList out;
  std::size_t comparisons = 0;
  const auto same = [&](std::size_t pi, std::size_t ti) {
    ++comparisons;
    return pattern[pi] == text[ti];
  };
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool matched;
    while (!(matched = same(k, i)) && k > 0) k = f[k - 1];
    if (matched) ++k;
    if (k == m) {
      out.push_back(i + 1 - m);
      k = f[k - 1];
    }
  }
  if (stats) stats->scan_comparisons = comparisons;
  return out;
}

template <class Seq>
MatchList search(const Seq& pattern, const Seq& text, SearchAlgorithm algorithm,
                 SearchStats* stats = nullptr) {
  switch (algorithm) {
    case SearchAlgorithm::naive:
      return naive_search(pattern, text);
    case SearchAlgorithm::rabin_karp:
      return rabin_karp_search(pattern, text);
    case SearchAlgorithm::boyer_moore:
      return boyer_moore_search(pattern, text);
    case SearchAlgorithm::kmp:
      return kmp_search(pattern, text, stats);
  }
  throw std::invalid_argument("search: unknown algorithm");
}

}  // namespace s2s
