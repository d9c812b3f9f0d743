#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "s2s/alignment.hpp"

using namespace s2s;
using testutil::equals_seq;
using testutil::strip_gaps;

namespace {

const TokenSeq kTokensS{"ATT", "G", "GC", "GC", "A", "C", "G"};
const TokenSeq kTokensT{"X", "ATT", "GC", "GC", "A", "A", "G"};

}  // namespace

TEST_CASE("token-mode global alignment opens with a gap against X", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto result = global_align(kTokensS, kTokensT, score_fn, gap);

  const double expected =
      oracle::global_score_recursive(kTokensS, kTokensT, score_fn, gap.per_gap);
  CHECK(result.score == expected);

  REQUIRE(!result.aligned_a.empty());
  CHECK(!result.aligned_a.front().has_value());  // leading gap in the first row
  REQUIRE(result.aligned_b.front().has_value());
  CHECK(*result.aligned_b.front() == "X");

  CHECK(equals_seq(kTokensS, strip_gaps(result.aligned_a)));
  CHECK(equals_seq(kTokensT, strip_gaps(result.aligned_b)));

  bool well_formed = false;
  const double recomputed = testutil::recompute_alignment_score(
      result.aligned_a, result.aligned_b, score_fn, gap.per_gap, &well_formed);
  CHECK(well_formed);
  CHECK(recomputed == result.score);
}

TEST_CASE("GATTACA vs GCATGCU scores zero under unit scoring", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto result = global_align(tokenize_chars("GATTACA"), tokenize_chars("GCATGCU"), score_fn, gap);
  CHECK(result.score == 0.0);
}

TEST_CASE("aligning an empty sequence produces all gaps", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto result = global_align(tokenize_chars(""), tokenize_chars("ab"), score_fn, gap);
  REQUIRE(result.aligned_a.size() == 2);
  CHECK(!result.aligned_a[0].has_value());
  CHECK(!result.aligned_a[1].has_value());
  REQUIRE(result.aligned_b.size() == 2);
  CHECK(*result.aligned_b[0] == U'a');
  CHECK(*result.aligned_b[1] == U'b');
  CHECK(result.score == -2.0);

  auto both_empty = global_align(tokenize_chars(""), tokenize_chars(""), score_fn, gap);
  CHECK(both_empty.aligned_a.empty());
  CHECK(both_empty.aligned_b.empty());
  CHECK(both_empty.score == 0.0);
}

TEST_CASE("global alignment exposes its matrix on request", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto plain = global_align(tokenize_chars("ab"), tokenize_chars("abc"), score_fn, gap);
  CHECK(!plain.matrix.has_value());
  auto kept = global_align(tokenize_chars("ab"), tokenize_chars("abc"), score_fn, gap, true);
  REQUIRE(kept.matrix.has_value());
  CHECK(kept.matrix->rows == 3);
  CHECK(kept.matrix->cols == 4);
  CHECK(kept.matrix->at(0, 0) == 0.0);
  CHECK(kept.matrix->at(0, 3) == -3.0);  // top row is cumulative gap penalties
  CHECK(kept.matrix->at(2, 3) == kept.score);
}

TEST_CASE("traceback prefers diagonal, then a gap in the second row", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  testutil::Rng rng(411);
  for (int iter = 0; iter < 200; ++iter) {
    auto a = testutil::random_char_seq(rng, 8, "ab");
    auto b = testutil::random_char_seq(rng, 8, "ab");
    auto got = global_align(a, b, score_fn, gap);
    auto [ref_a, ref_b] = oracle::global_align_reference(a, b, score_fn, gap.per_gap);
    INFO("a=" << utf8::encode(a) << " b=" << utf8::encode(b));
    CHECK(got.aligned_a == ref_a);
    CHECK(got.aligned_b == ref_b);
  }
}

TEST_CASE("equal sequences align along the diagonal", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto result = global_align(tokenize_chars("banana"), tokenize_chars("banana"), score_fn, gap);
  CHECK(result.score == 6.0);
  for (std::size_t i = 0; i < result.aligned_a.size(); ++i) {
    CHECK(result.aligned_a[i].has_value());
    CHECK(result.aligned_b[i].has_value());
  }
}

TEST_CASE("hirschberg agrees with the full-matrix alignment", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(2.0, -1.0, -2.0);
  auto a = tokenize_chars("AGTACGCA");
  auto b = tokenize_chars("TATGC");
  auto full = global_align(a, b, score_fn, gap);
  auto linear = hirschberg_align(a, b, score_fn, gap);
  CHECK(linear.score == full.score);
  CHECK(equals_seq(a, strip_gaps(linear.aligned_a)));
  CHECK(equals_seq(b, strip_gaps(linear.aligned_b)));
  bool well_formed = false;
  CHECK(testutil::recompute_alignment_score(linear.aligned_a, linear.aligned_b, score_fn,
                                            gap.per_gap, &well_formed) == linear.score);
  CHECK(well_formed);

  auto empty = hirschberg_align(tokenize_chars(""), tokenize_chars(""), score_fn, gap);
  CHECK(empty.score == 0.0);
  CHECK(empty.aligned_a.empty());
}

TEST_CASE("hirschberg matches full DP on random pairs", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(2.0, -1.0, -2.0);
  testutil::Rng rng(902);
  for (int iter = 0; iter < 100; ++iter) {
    auto a = testutil::random_char_seq(rng, 30, "ACGT");
    auto b = testutil::random_char_seq(rng, 30, "ACGT");
    auto full = global_align(a, b, score_fn, gap);
    auto linear = hirschberg_align(a, b, score_fn, gap);
    INFO("a=" << utf8::encode(a) << " b=" << utf8::encode(b));
    CHECK(linear.score == full.score);
    CHECK(equals_seq(a, strip_gaps(linear.aligned_a)));
    CHECK(equals_seq(b, strip_gaps(linear.aligned_b)));
    bool well_formed = false;
    CHECK(testutil::recompute_alignment_score(linear.aligned_a, linear.aligned_b, score_fn,
                                              gap.per_gap, &well_formed) == linear.score);
    CHECK(well_formed);
  }
}

TEST_CASE("local alignment finds the strong shared region", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(3.0, -3.0, -2.0);
  auto result =
      local_align(tokenize_chars("TGTTACGG"), tokenize_chars("GGTTGACTA"), score_fn, gap);
  CHECK(result.score == 13.0);
  REQUIRE(result.aligned_a.size() == 6);
  CHECK(strip_gaps(result.aligned_a) == std::vector<char32_t>{U'G', U'T', U'T', U'A', U'C'});
  CHECK(strip_gaps(result.aligned_b) ==
        std::vector<char32_t>{U'G', U'T', U'T', U'G', U'A', U'C'});
  CHECK(!result.aligned_a[3].has_value());  // the single gap column sits opposite G
}

TEST_CASE("local alignment of disjoint strings is empty with score zero", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto result = local_align(tokenize_chars("abc"), tokenize_chars("xyz"), score_fn, gap);
  CHECK(result.score == 0.0);
  CHECK(result.aligned_a.empty());
  CHECK(result.aligned_b.empty());
}

TEST_CASE("local alignment of an exact match consumes the whole string", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);
  auto result = local_align(tokenize_chars("abc"), tokenize_chars("abc"), score_fn, gap);
  CHECK(result.score == 3.0);
}

TEST_CASE("local score matches the substring-pair definition", "[alignment]") {
  auto [score_fn, gap] = uniform_scoring(2.0, -2.0, -1.0);
  testutil::Rng rng(77);
  for (int iter = 0; iter < 60; ++iter) {
    auto a = testutil::random_char_seq(rng, 6, "ab");
    auto b = testutil::random_char_seq(rng, 6, "ab");
    INFO("a=" << utf8::encode(a) << " b=" << utf8::encode(b));
    auto result = local_align(a, b, score_fn, gap);
    CHECK(result.score == oracle::local_score_enum(a, b, score_fn, gap.per_gap));
    bool well_formed = false;
    CHECK(testutil::recompute_alignment_score(result.aligned_a, result.aligned_b, score_fn,
                                              gap.per_gap, &well_formed) == result.score);
    CHECK(well_formed);
  }
}

TEST_CASE("longest common substring reports every witness", "[alignment]") {
  auto r = longest_common_substring(tokenize_chars("ABABC"), tokenize_chars("BABCA"));
  CHECK(r.length == 4);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0] == std::vector<char32_t>{U'B', U'A', U'B', U'C'});

  auto none = longest_common_substring(tokenize_chars("abc"), tokenize_chars("xyz"));
  CHECK(none.length == 0);
  CHECK(none.witnesses.empty());

  auto self = longest_common_substring(tokenize_chars("hello"), tokenize_chars("hello"));
  CHECK(self.length == 5);
  REQUIRE(self.witnesses.size() == 1);
  CHECK(self.witnesses[0] == std::vector<char32_t>{U'h', U'e', U'l', U'l', U'o'});
}

TEST_CASE("longest common substring agrees with enumeration", "[alignment]") {
  testutil::Rng rng(5150);
  for (int iter = 0; iter < 150; ++iter) {
    auto a = testutil::random_char_seq(rng, 10, "abc");
    auto b = testutil::random_char_seq(rng, 10, "abc");
    INFO("a=" << utf8::encode(a) << " b=" << utf8::encode(b));
    auto got = longest_common_substring(a, b);
    auto [len, expected] = oracle::lcsubstring_enum(a, b);
    CHECK(got.length == len);
    std::set<std::vector<char32_t>> got_set(got.witnesses.begin(), got.witnesses.end());
    CHECK(got_set == expected);
    CHECK(got_set.size() == got.witnesses.size());  // no duplicates reported
  }
}

TEST_CASE("longest common subsequence frozen examples", "[alignment]") {
  auto r = longest_common_subsequence(tokenize_chars("ABCBDAB"), tokenize_chars("BDCABA"));
  CHECK(r.length == 4);

  auto same = longest_common_subsequence(tokenize_chars("abc"), tokenize_chars("abc"));
  CHECK(same.length == 3);
  CHECK(same.witness == std::vector<char32_t>{U'a', U'b', U'c'});

  auto empty = longest_common_subsequence(tokenize_chars(""), tokenize_chars("abc"));
  CHECK(empty.length == 0);
  CHECK(empty.witness.empty());
}

TEST_CASE("longest common subsequence witness is a true LCS", "[alignment]") {
  testutil::Rng rng(31337);
  for (int iter = 0; iter < 80; ++iter) {
    auto a = testutil::random_char_seq(rng, 6, "abc");
    auto b = testutil::random_char_seq(rng, 6, "abc");
    INFO("a=" << utf8::encode(a) << " b=" << utf8::encode(b));
    auto got = longest_common_subsequence(a, b);
    auto [len, witnesses] = oracle::lcsubseq_enum(a, b);
    CHECK(got.length == len);
    CHECK(got.witness.size() == len);
    CHECK(witnesses.count(got.witness) == 1);
  }
}

TEST_CASE("dtw frozen examples", "[alignment]") {
  std::vector<double> s1{1, 2, 3}, s2{1, 2, 2, 3};
  auto r = dtw(s1, s2, AbsCost{});
  CHECK(r.total_cost == 0.0);
  CHECK(oracle::valid_warp_path(r.path, s1.size(), s2.size()));

  std::vector<double> same{4, 2, 7, 1};
  auto diag = dtw(same, same, AbsCost{});
  CHECK(diag.total_cost == 0.0);
  REQUIRE(diag.path.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(diag.path[k] == std::make_pair(k, k));

  std::vector<double> one{0}, two{5, 5};
  auto stretched = dtw(one, two, AbsCost{});
  CHECK(stretched.total_cost == 10.0);
  REQUIRE(stretched.path.size() == 2);
  CHECK(stretched.path[0] == std::make_pair(std::size_t{0}, std::size_t{0}));
  CHECK(stretched.path[1] == std::make_pair(std::size_t{0}, std::size_t{1}));

  CHECK_THROWS_AS(dtw(std::vector<double>{}, s2, AbsCost{}), std::invalid_argument);
  CHECK_THROWS_AS(dtw(s1, std::vector<double>{}, AbsCost{}), std::invalid_argument);
}

TEST_CASE("dtw matches path enumeration on tiny series", "[alignment]") {
  testutil::Rng rng(640);
  for (int iter = 0; iter < 120; ++iter) {
    auto s = testutil::random_int_series(rng, 4, -3, 3);
    auto t = testutil::random_int_series(rng, 5, -3, 3);
    auto got = dtw(s, t, AbsCost{});
    const double expected = oracle::dtw_enum(s, t, AbsCost{});
    INFO("n=" << s.size() << " m=" << t.size());
    CHECK(got.total_cost == expected);
    CHECK(oracle::valid_warp_path(got.path, s.size(), t.size()));
    CHECK(oracle::warp_path_cost(got.path, s, t, AbsCost{}) == got.total_cost);
  }
}

TEST_CASE("linear-space dtw reproduces the full result", "[alignment]") {
  testutil::Rng rng(641);
  for (int iter = 0; iter < 80; ++iter) {
    auto s = testutil::random_int_series(rng, 24, -5, 5);
    auto t = testutil::random_int_series(rng, 24, -5, 5);
    auto full = dtw(s, t, AbsCost{}, DtwSpace::full);
    auto linear = dtw(s, t, AbsCost{}, DtwSpace::linear);
    INFO("n=" << s.size() << " m=" << t.size());
    CHECK(linear.total_cost == full.total_cost);
    CHECK(oracle::valid_warp_path(linear.path, s.size(), t.size()));
    CHECK(oracle::warp_path_cost(linear.path, s, t, AbsCost{}) == linear.total_cost);
  }
}

TEST_CASE("dtw works over symbol sequences with an indicator cost", "[alignment]") {
  auto a = tokenize_chars("kitten");
  auto b = tokenize_chars("sitting");
  auto r = dtw(a, b, IndicatorCost{});
  CHECK(r.total_cost == oracle::dtw_recursive(a, b, IndicatorCost{}));
}

TEST_CASE("alignment works with a substitution matrix scorer", "[alignment]") {
  auto m = parse_substitution_matrix("  A B\nA 2 -3\nB -3 2\n");
  GapPenalty gap{-2.0};
  auto result = global_align(tokenize_chars("AAB"), tokenize_chars("AB"), m, gap);
  const double expected = oracle::global_score_recursive(
      tokenize_chars("AAB"), tokenize_chars("AB"),
      [&](char32_t x, char32_t y) { return m(x, y); }, -2.0);
  CHECK(result.score == expected);
}
