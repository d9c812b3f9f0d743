#pragma once

// Semantic search over dense vectors: exact flat kNN plus an IVF
// (inverted-file, k-means coarse quantizer) approximate index, with a
// versioned binary on-disk format.
//
// Scores are "larger is better" under both metrics: cosine similarity, or
// negative squared Euclidean distance. Vectors are stored exactly as
// inserted; cosine scoring divides the double-precision dot product by
// vector norms cached once at build/load time (and once per query), so
// scores match the textbook definition to the last bit and serialization
// round-trips without re-quantizing anything.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "s2s/core.hpp"

namespace s2s {

enum class Metric : std::uint8_t { cosine = 0, l2 = 1 };

inline const char* metric_name(Metric m) { return m == Metric::cosine ? "cosine" : "l2"; }

struct VectorRecord {
  std::string id;
  std::vector<float> vec;
};

struct Neighbor {
  std::string id;
  double score = 0.0;

  bool operator==(const Neighbor&) const = default;
};

struct FlatIndex {
  Metric metric = Metric::cosine;
  std::size_t dim = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<float>> vectors;  // stored exactly as inserted
  std::vector<double> norms;                // cached ||v|| per record (cosine scoring)

  std::size_t size() const { return ids.size(); }
};

struct IvfIndex {
  Metric metric = Metric::cosine;
  std::size_t dim = 0;
  bool trained = false;
  std::vector<std::vector<float>> centroids;
  std::vector<double> centroid_norms;                 // guarded: 1.0 for a zero centroid
  std::vector<std::string> ids;
  std::vector<std::vector<float>> vectors;            // stored exactly as inserted
  std::vector<double> norms;                          // cached ||v|| per record
  std::vector<std::vector<std::size_t>> postings;     // per-centroid record indices

  std::size_t size() const { return ids.size(); }
  std::size_t nlist() const { return centroids.size(); }
};

namespace detail {

inline double vdot(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

inline double vl2sq(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

inline double vnorm(const std::vector<float>& v) { return std::sqrt(vdot(v, v)); }

// Norm used for centroid scoring: a k-means centroid can legitimately be the
// zero vector (antipodal unit points average out), so map 0 to 1 rather than
// dividing by it — the zero centroid then scores 0 against every query.
inline double centroid_norm(const std::vector<float>& c) {
  const double n = vnorm(c);
  return n == 0.0 ? 1.0 : n;
}

// Unit-length float copy; training input for the cosine coarse quantizer.
inline std::vector<float> vnormalized(const std::vector<float>& v) {
  const double inv = 1.0 / vnorm(v);
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = static_cast<float>(static_cast<double>(v[i]) * inv);
  return out;
}

inline double record_score(Metric metric, const std::vector<float>& stored, double stored_norm,
                           const std::vector<float>& q, double q_norm) {
  return metric == Metric::cosine ? vdot(stored, q) / (stored_norm * q_norm) : -vl2sq(stored, q);
}

inline void sort_neighbors(std::vector<Neighbor>& out) {
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

inline void validate_records(const std::vector<VectorRecord>& records, Metric metric,
                             const char* who) {
  if (records.empty()) throw std::invalid_argument(std::string(who) + ": records must be nonempty");
  const std::size_t dim = records.front().vec.size();
  if (dim == 0) throw std::invalid_argument(std::string(who) + ": vectors must be nonempty");
  std::set<std::string_view> seen;
  for (const auto& r : records) {
    if (r.vec.size() != dim)
      throw std::invalid_argument(std::string(who) + ": dimension mismatch for id '" + r.id + "'");
    if (!seen.insert(r.id).second)
      throw std::invalid_argument(std::string(who) + ": duplicate id '" + r.id + "'");
    if (metric == Metric::cosine) {
      bool nonzero = false;
      for (float x : r.vec) nonzero |= (x != 0.0f);
      if (!nonzero)
        throw std::invalid_argument(std::string(who) + ": zero vector not allowed under cosine (id '" +
                                    r.id + "')");
    }
  }
}

inline double query_norm(Metric metric, std::size_t dim, const std::vector<float>& q,
                         const char* who) {
  if (q.size() != dim)
    throw std::invalid_argument(std::string(who) + ": query dimension " + std::to_string(q.size()) +
                                " does not match index dimension " + std::to_string(dim));
  if (metric != Metric::cosine) return 1.0;
  const double n = vnorm(q);
  if (n == 0.0)
    throw std::invalid_argument(std::string(who) + ": zero vector not allowed under cosine");
  return n;
}

}  // namespace detail

inline FlatIndex flat_build(const std::vector<VectorRecord>& records, Metric metric) {
  detail::validate_records(records, metric, "flat_build");
  FlatIndex index;
  index.metric = metric;
  index.dim = records.front().vec.size();
  index.ids.reserve(records.size());
  index.vectors.reserve(records.size());
  index.norms.reserve(records.size());
  for (const auto& r : records) {
    index.ids.push_back(r.id);
    index.vectors.push_back(r.vec);
    index.norms.push_back(detail::vnorm(r.vec));
  }
  return index;
}

/// Exact top-min(k, n) by metric score, sorted score-descending with ties
/// broken by ascending id.
inline std::vector<Neighbor> flat_query(const FlatIndex& index, const std::vector<float>& q,
                                        std::size_t k) {
  if (k < 1) throw std::invalid_argument("flat_query: k must be >= 1");
  const double qn = detail::query_norm(index.metric, index.dim, q, "flat_query");
  std::vector<Neighbor> out;
  out.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i)
    out.push_back(
        {index.ids[i], detail::record_score(index.metric, index.vectors[i], index.norms[i], q, qn)});
  detail::sort_neighbors(out);
  if (out.size() > k) out.resize(k);
  return out;
}

/// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed
/// seed: all random draws come from one mt19937_64 stream with explicit
/// integer/float mappings (no distribution objects). Empty clusters are
/// re-seeded from the point farthest from its assigned centroid. Appends
/// the post-assignment within-cluster sum of squares for each iteration to
/// sse_history when given; the sequence is non-increasing.
inline std::vector<std::vector<double>> kmeans(const std::vector<std::vector<float>>& points,
                                               std::size_t k, std::size_t iters, std::uint64_t seed,
                                               std::vector<double>* sse_history = nullptr) {
  const std::size_t n = points.size();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n)
    throw std::invalid_argument("kmeans: k (" + std::to_string(k) + ") exceeds point count (" +
                                std::to_string(n) + ")");
  const std::size_t dim = points.front().size();

  std::mt19937_64 rng(seed);
  const auto next_index = [&](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };
  const auto next_unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  const auto to_double = [](const std::vector<float>& v) {
    return std::vector<double>(v.begin(), v.end());
  };
  const auto dist2 = [dim](const std::vector<float>& p, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t e = 0; e < dim; ++e) {
      const double d = static_cast<double>(p[e]) - c[e];
      s += d * d;
    }
    return s;
  };

  // k-means++ seeding: first centroid uniform, then proportional to squared
  // distance from the nearest chosen centroid.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  centroids.push_back(to_double(points[next_index(n)]));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(points[i], centroids.back());
  while (centroids.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = next_unit() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // rounding fell off the end: last positive-weight point
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    }
    if (pick == n) pick = next_index(n);  // all points coincide with centroids
    centroids.push_back(to_double(points[pick]));
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2(points[i], centroids.back()));
  }

  std::vector<std::size_t> assign(n, 0);
  std::vector<std::size_t> prev_assign;
  for (std::size_t iter = 0; iter < iters; ++iter) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = dist2(points[i], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = dist2(points[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
      sse += best_d;
    }
    if (sse_history) sse_history->push_back(sse);
    if (assign == prev_assign) break;
    prev_assign = assign;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e = 0; e < dim; ++e) sums[assign[i]][e] += static_cast<double>(points[i][e]);
      ++counts[assign[i]];
    }
    std::vector<bool> stolen(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t e = 0; e < dim; ++e) centroids[c][e] = sums[c][e] / static_cast<double>(counts[c]);
      } else {
        // Re-seed the empty cluster from the farthest point.
        std::size_t far = n;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (stolen[i]) continue;
          const double d = dist2(points[i], centroids[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        if (far < n) {
          stolen[far] = true;
          centroids[c] = to_double(points[far]);
        }
      }
    }
  }
  return centroids;
}

namespace detail {

// Probe/assignment order: best centroid first, ties by ascending list index.
inline std::vector<std::size_t> rank_centroids(const std::vector<std::vector<float>>& centroids,
                                               const std::vector<double>& centroid_norms,
                                               const std::vector<float>& v, double v_norm,
                                               Metric metric) {
  std::vector<std::size_t> order(centroids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> score(centroids.size());
  for (std::size_t i = 0; i < centroids.size(); ++i)
    score[i] = record_score(metric, centroids[i], centroid_norms[i], v, v_norm);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  return order;
}

}  // namespace detail

/// Builds the coarse quantizer with kmeans over the stored vectors (their
/// unit-length copies under cosine; centroids are re-normalized so nearest-
/// centroid agrees between the dot-product and Euclidean views), then
/// assigns every record to its best posting list.
inline IvfIndex ivf_build(const std::vector<VectorRecord>& records, Metric metric,
                          std::size_t nlist, std::uint64_t seed, std::size_t iters = 15) {
  detail::validate_records(records, metric, "ivf_build");
  if (nlist < 1) throw std::invalid_argument("ivf_build: nlist must be >= 1");
  if (records.size() < nlist)
    throw std::invalid_argument("ivf_build: record count (" + std::to_string(records.size()) +
                                ") is below nlist (" + std::to_string(nlist) + ")");

  IvfIndex index;
  index.metric = metric;
  index.dim = records.front().vec.size();
  index.ids.reserve(records.size());
  index.vectors.reserve(records.size());
  index.norms.reserve(records.size());
  for (const auto& r : records) {
    index.ids.push_back(r.id);
    index.vectors.push_back(r.vec);
    index.norms.push_back(detail::vnorm(r.vec));
  }

  std::vector<std::vector<float>> training;
  if (metric == Metric::cosine) {
    training.reserve(index.vectors.size());
    for (const auto& v : index.vectors) training.push_back(detail::vnormalized(v));
  }
  const auto raw_centroids =
      kmeans(metric == Metric::cosine ? training : index.vectors, nlist, iters, seed);
  index.centroids.reserve(nlist);
  index.centroid_norms.reserve(nlist);
  for (const auto& c : raw_centroids) {
    std::vector<double> cd = c;
    if (metric == Metric::cosine) {
      double nn = 0.0;
      for (double x : cd) nn += x * x;
      if (nn > 0.0) {
        const double inv = 1.0 / std::sqrt(nn);
        for (double& x : cd) x *= inv;
      }
    }
    std::vector<float> cf(cd.size());
    for (std::size_t e = 0; e < cd.size(); ++e) cf[e] = static_cast<float>(cd[e]);
    // Norm of the rounded float centroid, so a reloaded index ranks
    // posting lists with the very same doubles.
    index.centroid_norms.push_back(detail::centroid_norm(cf));
    index.centroids.push_back(std::move(cf));
  }

  index.postings.assign(nlist, {});
  for (std::size_t i = 0; i < index.vectors.size(); ++i) {
    const auto order = detail::rank_centroids(index.centroids, index.centroid_norms,
                                              index.vectors[i], index.norms[i], metric);
    index.postings[order.front()].push_back(i);
  }
  index.trained = true;
  return index;
}

/// Scans the nprobe posting lists whose centroids score best against the
/// query; returns the top-k among scanned records. nprobe == nlist is an
/// exhaustive scan and matches flat_query exactly.
inline std::vector<Neighbor> ivf_query(const IvfIndex& index, const std::vector<float>& q,
                                       std::size_t k, std::size_t nprobe) {
  if (k < 1) throw std::invalid_argument("ivf_query: k must be >= 1");
  if (nprobe < 1 || nprobe > index.nlist())
    throw std::invalid_argument("ivf_query: nprobe must be in [1, " + std::to_string(index.nlist()) +
                                "], got " + std::to_string(nprobe));
  const double qn = detail::query_norm(index.metric, index.dim, q, "ivf_query");
  const auto order =
      detail::rank_centroids(index.centroids, index.centroid_norms, q, qn, index.metric);
  std::vector<Neighbor> out;
  for (std::size_t p = 0; p < nprobe; ++p) {
    for (std::size_t i : index.postings[order[p]])
      out.push_back(
          {index.ids[i], detail::record_score(index.metric, index.vectors[i], index.norms[i], q, qn)});
  }
  detail::sort_neighbors(out);
  if (out.size() > k) out.resize(k);
  return out;
}

// ---------------------------------------------------------------------------
// On-disk format
//
//   magic   6 bytes  "S2SIDX"
//   version u32 LE   1
//   metric  u8       0 = cosine, 1 = l2
//   E       u32 LE   vector dimension
//   n       u64 LE   record count
//   nlist   u32 LE   posting-list count; 0 = flat index
//   [nlist > 0] centroids: nlist * E * f32 LE
//   records, grouped by posting list when nlist > 0 (each list: u64 LE
//   count, then its records), otherwise n records in storage order.
//   record: u32 LE id byte length, id bytes (UTF-8), E * f32 LE vector.

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFULL));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

inline void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline void read_exact(std::istream& in, char* buf, std::size_t len) {
  in.read(buf, static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len)
    throw ParseError("unexpected end of index file");
}

inline std::uint32_t get_u32(std::istream& in) {
  char b[4];
  read_exact(in, b, 4);
  const auto u = [&](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])); };
  return u(0) | (u(1) << 8) | (u(2) << 16) | (u(3) << 24);
}

inline std::uint64_t get_u64(std::istream& in) {
  const std::uint64_t lo = get_u32(in);
  const std::uint64_t hi = get_u32(in);
  return lo | (hi << 32);
}

inline float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

inline void put_record(std::ostream& out, const std::string& id, const std::vector<float>& vec) {
  put_u32(out, static_cast<std::uint32_t>(id.size()));
  out.write(id.data(), static_cast<std::streamsize>(id.size()));
  for (float x : vec) put_f32(out, x);
}

inline std::pair<std::string, std::vector<float>> get_record(std::istream& in, std::size_t dim) {
  const std::uint32_t len = get_u32(in);
  std::string id(len, '\0');
  if (len > 0) read_exact(in, id.data(), len);
  std::vector<float> vec(dim);
  for (std::size_t e = 0; e < dim; ++e) vec[e] = get_f32(in);
  return {std::move(id), std::move(vec)};
}

inline void put_header(std::ostream& out, Metric metric, std::size_t dim, std::size_t n,
                       std::size_t nlist) {
  out.write("S2SIDX", 6);
  put_u32(out, 1);  // version
  const char metric_byte = static_cast<char>(static_cast<std::uint8_t>(metric));
  out.write(&metric_byte, 1);
  put_u32(out, static_cast<std::uint32_t>(dim));
  put_u64(out, n);
  put_u32(out, static_cast<std::uint32_t>(nlist));
}

}  // namespace detail

inline void save_index(const FlatIndex& index, std::ostream& out) {
  detail::put_header(out, index.metric, index.dim, index.size(), 0);
  for (std::size_t i = 0; i < index.size(); ++i)
    detail::put_record(out, index.ids[i], index.vectors[i]);
  if (!out) throw std::runtime_error("save_index: write failed");
}

inline void save_index(const IvfIndex& index, std::ostream& out) {
  detail::put_header(out, index.metric, index.dim, index.size(), index.nlist());
  for (const auto& c : index.centroids)
    for (float x : c) detail::put_f32(out, x);
  for (const auto& list : index.postings) {
    detail::put_u64(out, list.size());
    for (std::size_t i : list) detail::put_record(out, index.ids[i], index.vectors[i]);
  }
  if (!out) throw std::runtime_error("save_index: write failed");
}

using AnyIndex = std::variant<FlatIndex, IvfIndex>;

/// Reads either index kind back; queries on the loaded index answer
/// identically to the saved one (vectors and centroids are stored exactly,
/// as 32-bit floats).
inline AnyIndex load_index(std::istream& in) {
  char magic[6];
  detail::read_exact(in, magic, 6);
  if (std::string_view(magic, 6) != "S2SIDX") throw ParseError("not an s2s index file (bad magic)");
  const std::uint32_t version = detail::get_u32(in);
  if (version != 1)
    throw ParseError("unsupported index version " + std::to_string(version));
  char metric_byte;
  detail::read_exact(in, &metric_byte, 1);
  const auto metric_value = static_cast<std::uint8_t>(metric_byte);
  if (metric_value > 1) throw ParseError("unknown metric code " + std::to_string(metric_value));
  const Metric metric = static_cast<Metric>(metric_value);
  const std::size_t dim = detail::get_u32(in);
  if (dim == 0) throw ParseError("index dimension must be positive");
  const std::uint64_t n = detail::get_u64(in);
  if (n == 0) throw ParseError("index contains no records");
  const std::size_t nlist = detail::get_u32(in);

  const auto checked_norm = [metric](const std::vector<float>& vec) {
    const double norm = detail::vnorm(vec);
    if (metric == Metric::cosine && norm == 0.0)
      throw ParseError("zero vector not allowed under cosine");
    return norm;
  };

  if (nlist == 0) {
    FlatIndex index;
    index.metric = metric;
    index.dim = dim;
    index.ids.reserve(n);
    index.vectors.reserve(n);
    index.norms.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      auto [id, vec] = detail::get_record(in, dim);
      index.ids.push_back(std::move(id));
      index.norms.push_back(checked_norm(vec));
      index.vectors.push_back(std::move(vec));
    }
    return index;
  }

  IvfIndex index;
  index.metric = metric;
  index.dim = dim;
  index.centroids.assign(nlist, std::vector<float>(dim));
  for (auto& c : index.centroids) {
    for (std::size_t e = 0; e < dim; ++e) c[e] = detail::get_f32(in);
    index.centroid_norms.push_back(detail::centroid_norm(c));
  }
  index.postings.assign(nlist, {});
  std::uint64_t total = 0;
  for (std::size_t l = 0; l < nlist; ++l) {
    const std::uint64_t count = detail::get_u64(in);
    total += count;
    if (total > n) throw ParseError("posting-list sizes exceed record count");
    for (std::uint64_t i = 0; i < count; ++i) {
      auto [id, vec] = detail::get_record(in, dim);
      index.postings[l].push_back(index.ids.size());
      index.ids.push_back(std::move(id));
      index.norms.push_back(checked_norm(vec));
      index.vectors.push_back(std::move(vec));
    }
  }
  if (total != n)
    throw ParseError("posting-list sizes sum to " + std::to_string(total) + ", expected " +
                     std::to_string(n));
  index.trained = true;
  return index;
}

/// Query dispatch over either index kind; nprobe applies to IVF only.
inline std::vector<Neighbor> query_index(const AnyIndex& index, const std::vector<float>& q,
                                         std::size_t k, std::size_t nprobe) {
  if (const auto* flat = std::get_if<FlatIndex>(&index)) return flat_query(*flat, q, k);
  return ivf_query(std::get<IvfIndex>(index), q, k, nprobe);
}

}  // namespace s2s
