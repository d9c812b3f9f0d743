#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "s2s/vector_search.hpp"

using namespace s2s;

namespace {

std::vector<VectorRecord> random_records(testutil::Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<VectorRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    VectorRecord rec;
    rec.id = "r" + std::to_string(i);
    rec.vec.resize(dim);
    bool nonzero = false;
    for (auto& x : rec.vec) {
      x = static_cast<float>(static_cast<long long>(testutil::draw(rng, 0, 2000)) - 1000) / 64.0f;
      nonzero = nonzero || x != 0.0f;
    }
    if (!nonzero) rec.vec[0] = 1.0f;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<VectorRecord> gaussian_records(std::size_t n, std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    VectorRecord rec;
    rec.id = "g" + std::to_string(i);
    rec.vec.resize(dim);
    for (auto& x : rec.vec) x = static_cast<float>(normal(rng));
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

TEST_CASE("a record is its own nearest neighbor under cosine", "[vectorsearch]") {
  testutil::Rng rng(41);
  auto records = random_records(rng, 50, 8);
  auto index = flat_build(records, Metric::cosine);
  for (std::size_t i = 0; i < records.size(); i += 7) {
    auto hits = flat_query(index, records[i].vec, 3);
    REQUIRE(!hits.empty());
    CHECK(hits[0].id == records[i].id);
    CHECK_THAT(hits[0].score, Catch::Matchers::WithinAbs(1.0, 1e-6));
  }
}

TEST_CASE("a record is its own nearest neighbor under l2", "[vectorsearch]") {
  testutil::Rng rng(42);
  auto records = random_records(rng, 50, 8);
  auto index = flat_build(records, Metric::l2);
  auto hits = flat_query(index, records[17].vec, 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].id == records[17].id);
  CHECK(hits[0].score == 0.0);  // negated squared distance to itself
}

TEST_CASE("k larger than the corpus returns every record", "[vectorsearch]") {
  testutil::Rng rng(43);
  auto records = random_records(rng, 9, 4);
  auto index = flat_build(records, Metric::cosine);
  auto hits = flat_query(index, records[0].vec, 100);
  CHECK(hits.size() == records.size());
  CHECK_THROWS_AS(flat_query(index, records[0].vec, 0), std::invalid_argument);
}

TEST_CASE("flat queries match a direct-definition scan", "[vectorsearch]") {
  testutil::Rng rng(44);
  for (int iter = 0; iter < 20; ++iter) {
    const std::size_t n = testutil::draw(rng, 1, 200);
    const std::size_t dim = testutil::draw(rng, 1, 16);
    auto records = random_records(rng, n, dim);
    const Metric metric = iter % 2 == 0 ? Metric::cosine : Metric::l2;
    auto index = flat_build(records, metric);
    auto probe = random_records(rng, 1, dim)[0].vec;
    auto got = flat_query(index, probe, 10);
    auto expected = oracle::scan_query(records, metric, probe, 10);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == expected[i].id);
      CHECK_THAT(got[i].score, Catch::Matchers::WithinAbs(expected[i].score, 1e-9));
    }
  }
}

TEST_CASE("neighbors sort by score then id", "[vectorsearch]") {
  std::vector<VectorRecord> records{
      {"b", {1.0f, 0.0f}}, {"a", {1.0f, 0.0f}}, {"c", {0.0f, 1.0f}}};
  auto index = flat_build(records, Metric::cosine);
  auto hits = flat_query(index, {1.0f, 0.0f}, 3);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].id == "a");  // tie with b broken by id
  CHECK(hits[1].id == "b");
  CHECK(hits[2].id == "c");
}

TEST_CASE("record validation rejects malformed corpora", "[vectorsearch]") {
  CHECK_THROWS_AS(flat_build({}, Metric::cosine), std::invalid_argument);
  CHECK_THROWS_AS(flat_build({{"a", {1.0f}}, {"a", {2.0f}}}, Metric::cosine),
                  std::invalid_argument);  // duplicate ids
  CHECK_THROWS_AS(flat_build({{"a", {1.0f}}, {"b", {1.0f, 2.0f}}}, Metric::cosine),
                  std::invalid_argument);  // ragged dimensions
  CHECK_THROWS_AS(flat_build({{"a", {0.0f, 0.0f}}}, Metric::cosine),
                  std::invalid_argument);  // zero vector under cosine
  CHECK_NOTHROW(flat_build({{"a", {0.0f, 0.0f}}}, Metric::l2));
  auto index = flat_build({{"a", {1.0f, 0.0f}}}, Metric::cosine);
  CHECK_THROWS_AS(flat_query(index, {1.0f}, 1), std::invalid_argument);  // query dim
  CHECK_THROWS_AS(flat_query(index, {0.0f, 0.0f}, 1), std::invalid_argument);
}

TEST_CASE("kmeans with k equal to the point count reproduces the inputs", "[vectorsearch]") {
  testutil::Rng rng(45);
  std::vector<std::vector<float>> points;
  for (int i = 0; i < 6; ++i) {
    points.push_back({static_cast<float>(i), static_cast<float>(i * i)});
  }
  auto centroids = kmeans(points, points.size(), 10, 99);
  REQUIRE(centroids.size() == points.size());
  std::set<std::pair<double, double>> got, want;
  for (const auto& c : centroids) got.insert({c[0], c[1]});
  for (const auto& p : points) want.insert({p[0], p[1]});
  CHECK(got == want);
}

TEST_CASE("kmeans separates sign-separated clouds", "[vectorsearch]") {
  testutil::Rng rng(46);
  std::vector<std::vector<float>> points;
  for (int i = 0; i < 40; ++i) {
    const float sign = i % 2 == 0 ? 1.0f : -1.0f;
    std::vector<float> p(3);
    for (auto& x : p)
      x = sign * 10.0f +
          static_cast<float>(static_cast<long long>(testutil::draw(rng, 0, 200)) - 100) / 100.0f;
    points.push_back(std::move(p));
  }
  auto centroids = kmeans(points, 2, 25, 7);
  REQUIRE(centroids.size() == 2);
  const bool first_positive = centroids[0][0] > 0.0;
  for (double x : centroids[0]) CHECK((x > 0) == first_positive);
  for (double x : centroids[1]) CHECK((x > 0) != first_positive);
  for (double x : centroids[0]) CHECK(std::abs(std::abs(x) - 10.0) < 2.0);
}

TEST_CASE("kmeans is deterministic for a fixed seed", "[vectorsearch]") {
  testutil::Rng rng(47);
  std::vector<std::vector<float>> points;
  for (int i = 0; i < 100; ++i) {
    std::vector<float> p(5);
    for (auto& x : p)
      x = static_cast<float>(static_cast<long long>(testutil::draw(rng, 0, 2000)) - 1000) / 32.0f;
    points.push_back(std::move(p));
  }
  auto a = kmeans(points, 7, 20, 1234);
  auto b = kmeans(points, 7, 20, 1234);
  CHECK(a == b);  // bitwise identical
}

TEST_CASE("kmeans records a non-increasing SSE history", "[vectorsearch]") {
  auto records = gaussian_records(400, 6, 2026);
  std::vector<std::vector<float>> points;
  for (const auto& r : records) points.push_back(r.vec);
  std::vector<double> history;
  kmeans(points, 8, 30, 5, &history);
  REQUIRE(!history.empty());
  for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
}

TEST_CASE("ivf with one list behaves like flat search", "[vectorsearch]") {
  testutil::Rng rng(48);
  auto records = random_records(rng, 60, 6);
  auto flat = flat_build(records, Metric::cosine);
  auto ivf = ivf_build(records, Metric::cosine, 1, 11);
  CHECK(ivf.nlist() == 1);
  for (int q = 0; q < 10; ++q) {
    auto probe = random_records(rng, 1, 6)[0].vec;
    auto a = flat_query(flat, probe, 5);
    auto b = ivf_query(ivf, probe, 5, 1);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == b[i].id);
      CHECK_THAT(a[i].score, Catch::Matchers::WithinAbs(b[i].score, 1e-6));
    }
  }
}

TEST_CASE("posting list sizes sum to the record count", "[vectorsearch]") {
  testutil::Rng rng(49);
  auto records = random_records(rng, 300, 8);
  auto ivf = ivf_build(records, Metric::l2, 12, 3);
  std::size_t total = 0;
  std::set<std::string> seen;
  for (const auto& posting : ivf.postings) {
    total += posting.size();
    for (auto pos : posting) seen.insert(ivf.ids[pos]);
  }
  CHECK(total == records.size());
  CHECK(seen.size() == records.size());
}

TEST_CASE("ivf requires at least as many records as lists", "[vectorsearch]") {
  testutil::Rng rng(50);
  auto records = random_records(rng, 5, 4);
  CHECK_THROWS_AS(ivf_build(records, Metric::cosine, 6, 1), std::invalid_argument);
  CHECK_NOTHROW(ivf_build(records, Metric::cosine, 5, 1));
  CHECK_THROWS_AS(ivf_build(records, Metric::cosine, 0, 1), std::invalid_argument);
}

TEST_CASE("probing every list recovers the exact flat answer", "[vectorsearch]") {
  testutil::Rng rng(51);
  auto records = random_records(rng, 250, 10);
  for (Metric metric : {Metric::cosine, Metric::l2}) {
    auto flat = flat_build(records, metric);
    auto ivf = ivf_build(records, metric, 10, 21);
    for (int q = 0; q < 20; ++q) {
      auto probe = random_records(rng, 1, 10)[0].vec;
      auto exact = flat_query(flat, probe, 10);
      auto full_probe = ivf_query(ivf, probe, 10, ivf.nlist());
      REQUIRE(exact.size() == full_probe.size());
      for (std::size_t i = 0; i < exact.size(); ++i) CHECK(exact[i].id == full_probe[i].id);
    }
  }
}

TEST_CASE("recall@10 grows with nprobe and reaches 1.0", "[vectorsearch]") {
  auto records = gaussian_records(1000, 8, 909);
  auto flat = flat_build(records, Metric::l2);
  auto ivf = ivf_build(records, Metric::l2, 8, 17);

  std::mt19937_64 qrng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<float>> queries(40, std::vector<float>(8));
  for (auto& q : queries)
    for (auto& x : q) x = static_cast<float>(normal(qrng));

  double previous = -1.0;
  double final_recall = 0.0;
  for (std::size_t nprobe = 1; nprobe <= ivf.nlist(); ++nprobe) {
    double recall_sum = 0.0;
    for (const auto& q : queries) {
      auto exact = flat_query(flat, q, 10);
      auto approx = ivf_query(ivf, q, 10, nprobe);
      std::set<std::string> exact_ids;
      for (const auto& h : exact) exact_ids.insert(h.id);
      std::size_t overlap = 0;
      for (const auto& h : approx)
        if (exact_ids.count(h.id)) ++overlap;
      recall_sum += static_cast<double>(overlap) / static_cast<double>(exact.size());
    }
    const double recall = recall_sum / static_cast<double>(queries.size());
    INFO("nprobe=" << nprobe);
    CHECK(recall >= previous - 1e-12);
    previous = recall;
    final_recall = recall;
  }
  CHECK(final_recall == 1.0);
}

TEST_CASE("ivf_query validates nprobe", "[vectorsearch]") {
  testutil::Rng rng(52);
  auto records = random_records(rng, 30, 4);
  auto ivf = ivf_build(records, Metric::cosine, 4, 5);
  auto probe = records[0].vec;
  CHECK_THROWS_AS(ivf_query(ivf, probe, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(ivf_query(ivf, probe, 3, 5), std::invalid_argument);
  CHECK_NOTHROW(ivf_query(ivf, probe, 3, 4));
}

TEST_CASE("indexes round-trip through the binary format", "[vectorsearch]") {
  testutil::Rng rng(53);
  auto records = random_records(rng, 120, 7);

  SECTION("flat") {
    auto index = flat_build(records, Metric::cosine);
    std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
    save_index(index, buffer);
    auto restored = load_index(buffer);
    REQUIRE(std::holds_alternative<FlatIndex>(restored));
    for (int q = 0; q < 100; ++q) {
      auto probe = random_records(rng, 1, 7)[0].vec;
      auto before = flat_query(index, probe, 5);
      auto after = query_index(restored, probe, 5, 1);
      REQUIRE(before.size() == after.size());
      for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].id == after[i].id);
        CHECK(before[i].score == after[i].score);  // stored floats are exact
      }
    }
  }

  SECTION("ivf") {
    auto index = ivf_build(records, Metric::l2, 6, 31);
    std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
    save_index(index, buffer);
    auto restored = load_index(buffer);
    REQUIRE(std::holds_alternative<IvfIndex>(restored));
    const auto& loaded = std::get<IvfIndex>(restored);
    CHECK(loaded.centroids == index.centroids);
    // Records are regrouped by posting list on disk, so raw indices shift;
    // the id sequence of each list is what must survive.
    REQUIRE(loaded.postings.size() == index.postings.size());
    for (std::size_t l = 0; l < index.postings.size(); ++l) {
      std::vector<std::string> before_ids, after_ids;
      for (std::size_t i : index.postings[l]) before_ids.push_back(index.ids[i]);
      for (std::size_t i : loaded.postings[l]) after_ids.push_back(loaded.ids[i]);
      CHECK(before_ids == after_ids);
    }
    for (int q = 0; q < 100; ++q) {
      auto probe = random_records(rng, 1, 7)[0].vec;
      auto before = ivf_query(index, probe, 5, 3);
      auto after = query_index(restored, probe, 5, 3);
      REQUIRE(before.size() == after.size());
      for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].id == after[i].id);
        CHECK(before[i].score == after[i].score);
      }
    }
  }
}

TEST_CASE("the loader rejects malformed files", "[vectorsearch]") {
  testutil::Rng rng(54);
  auto records = random_records(rng, 10, 3);
  auto index = flat_build(records, Metric::cosine);
  std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
  save_index(index, buffer);
  const std::string bytes = buffer.str();

  SECTION("bad magic") {
    std::string corrupt = bytes;
    corrupt[0] = 'X';
    std::stringstream in(corrupt, std::ios::in | std::ios::binary);
    CHECK_THROWS_AS(load_index(in), ParseError);
  }

  SECTION("unsupported version") {
    std::string corrupt = bytes;
    corrupt[6] = 9;  // version field follows the 6-byte magic
    std::stringstream in(corrupt, std::ios::in | std::ios::binary);
    CHECK_THROWS_AS(load_index(in), ParseError);
  }

  SECTION("truncation") {
    for (std::size_t cut : {bytes.size() / 4, bytes.size() / 2, bytes.size() - 1}) {
      std::stringstream in(bytes.substr(0, cut), std::ios::in | std::ios::binary);
      try {
        load_index(in);
        FAIL("expected ParseError at cut " << cut);
      } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unexpected end") != std::string::npos);
      }
    }
  }
}
