#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "s2s/core.hpp"

using namespace s2s;

TEST_CASE("char mode yields one symbol per Unicode scalar", "[core]") {
  CHECK(tokenize_chars("abc") == CharSeq{U"abc"});
  CHECK(tokenize_chars("") == CharSeq{});
  CHECK(tokenize_chars("na\xc3\xafve") == CharSeq{U"naïve"});  // naïve: 5 scalars
  CHECK(tokenize_chars("\xe6\x97\xa5\xe6\x9c\xac").size() == 2);    // two CJK scalars
  CHECK(utf8::scalar_count("\xe6\x97\xa5\xe6\x9c\xac") == 2);
}

TEST_CASE("whitespace mode yields maximal nonempty tokens", "[core]") {
  CHECK(tokenize_whitespace("ATT G GC") == TokenSeq{"ATT", "G", "GC"});
  CHECK(tokenize_whitespace("") == TokenSeq{});
  CHECK(tokenize_whitespace("  a\t\tb \n c  ") == TokenSeq{"a", "b", "c"});
  CHECK(tokenize_whitespace("   \t\n ") == TokenSeq{});
}

TEST_CASE("delimiter mode splits on the literal delimiter", "[core]") {
  CHECK(tokenize_split("a,b,,c", ",") == TokenSeq{"a", "b", "c"});
  CHECK(tokenize_split("a::b::c", "::") == TokenSeq{"a", "b", "c"});
  CHECK(tokenize_split("", ",") == TokenSeq{});
  CHECK(tokenize_split(",,,", ",") == TokenSeq{});
  CHECK_THROWS_AS(tokenize_split("abc", ""), std::invalid_argument);

  // Round trip: joining with the delimiter reproduces the text up to
  // collapsed adjacent delimiters.
  const std::string text = "one,,two,three,";
  auto tokens = tokenize_split(text, ",");
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined += ",";
    joined += tokens[i];
  }
  CHECK(joined == "one,two,three");
}

TEST_CASE("tokenize dispatches on mode", "[core]") {
  auto seq = tokenize("abc", TokenizeMode::chars);
  REQUIRE(std::holds_alternative<CharSeq>(seq));
  CHECK(std::get<CharSeq>(seq) == CharSeq{U"abc"});

  auto words = tokenize("ATT G GC", TokenizeMode::whitespace);
  REQUIRE(std::holds_alternative<TokenSeq>(words));
  CHECK(std::get<TokenSeq>(words) == TokenSeq{"ATT", "G", "GC"});

  auto empty = tokenize("", TokenizeMode::chars);
  CHECK(std::get<CharSeq>(empty).empty());
}

TEST_CASE("cost model validation", "[core]") {
  CostModel ok;
  CHECK_NOTHROW(ok.validate());
  CostModel bad;
  bad.insert_cost = -0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CostModel inf_cost;
  inf_cost.substitute_cost = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(inf_cost.validate(), std::invalid_argument);
}

TEST_CASE("uniform scoring bundles match/mismatch/gap", "[core]") {
  auto [score, gap] = uniform_scoring(2.0, -1.0, -2.0);
  CHECK(score(U'a', U'a') == 2.0);
  CHECK(score(U'a', U'b') == -1.0);
  CHECK(gap.per_gap == -2.0);
  CHECK_THROWS_AS(uniform_scoring(std::numeric_limits<double>::quiet_NaN(), -1.0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("substitution matrix parses a small table", "[core]") {
  auto m = parse_substitution_matrix("  A B\nA 1 -1\nB -1 1\n");
  CHECK(m.score("A", "A") == 1.0);
  CHECK(m.score("A", "B") == -1.0);
  CHECK(m.score("B", "A") == -1.0);
  CHECK(m.score("B", "B") == 1.0);
  CHECK(m(U'A', U'A') == 1.0);
  CHECK(m('A', 'B') == -1.0);
}

TEST_CASE("substitution matrix lookups fall back to the default", "[core]") {
  auto m = parse_substitution_matrix("A B\nA 1 -1\nB -1 1");
  CHECK(m.score("A", "Z") == 0.0);
  SubstitutionMatrix with_default({"A"}, {5.0}, -9.0);
  CHECK(with_default.score("A", "Q") == -9.0);
}

TEST_CASE("BLOSUM62 fixture parses with expected entries", "[core]") {
  std::ifstream in(testutil::fixture_path("blosum62.txt"));
  REQUIRE(in.good());
  auto m = parse_substitution_matrix(in);
  REQUIRE(m.alphabet().size() == 24);
  CHECK(m.score("W", "W") == 11.0);
  CHECK(m.score("A", "A") == 4.0);
  CHECK(m.score("C", "C") == 9.0);
  CHECK(m.score("*", "*") == 1.0);
  // The table must be symmetric.
  for (const auto& a : m.alphabet())
    for (const auto& b : m.alphabet()) CHECK(m.score(a, b) == m.score(b, a));
}

TEST_CASE("serialize then parse is a fixed point", "[core]") {
  auto m = parse_substitution_matrix("  A B C\nA 1 -1 0\nB -1 1 -2\nC 0 -2 5\n");
  auto text = serialize_substitution_matrix(m);
  auto again = parse_substitution_matrix(text);
  CHECK(again == m);
  CHECK(serialize_substitution_matrix(again) == text);

  std::ifstream in(testutil::fixture_path("blosum62.txt"));
  REQUIRE(in.good());
  auto blosum = parse_substitution_matrix(in);
  CHECK(parse_substitution_matrix(serialize_substitution_matrix(blosum)) == blosum);
}

TEST_CASE("matrix parse errors carry line numbers", "[core]") {
  try {
    parse_substitution_matrix("A B\nA 1 -1\nB -1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  try {
    parse_substitution_matrix("A B\nA 1 oops\nB -1 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  CHECK_THROWS_AS(parse_substitution_matrix(""), ParseError);
  CHECK_THROWS_AS(parse_substitution_matrix("A B\nB 1 -1\nA -1 1\n"), ParseError);  // row order
  CHECK_THROWS_AS(parse_substitution_matrix("A A\nA 1 1\nA 1 1\n"), ParseError);    // dup symbol
}

TEST_CASE("comments and blank lines are skipped", "[core]") {
  auto m = parse_substitution_matrix("# header comment\n\n  A B\nA 1 -1\n\nB -1 1\n");
  CHECK(m.score("A", "A") == 1.0);
}

TEST_CASE("score matrix shape and accessors", "[core]") {
  ScoreMatrix m;
  m.rows = 2;
  m.cols = 3;
  m.cells = {1, 2, 3, 4, 5, 6};
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 2) == 6.0);
}

TEST_CASE("symbol text renders every symbol kind", "[core]") {
  CHECK(symbol_text(std::string("ATT")) == "ATT");
  CHECK(symbol_text(U'x') == "x");
  CHECK(symbol_text('y') == "y");
  CHECK(symbol_text(U'é') == "\xc3\xa9");
}
