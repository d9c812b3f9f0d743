// Walks through the pairwise-comparison side of the library: global and
// local alignment with rendered output, common substructure queries, and
// a handful of distance / similarity measures over the same inputs.

#include <iostream>
#include <string>
#include <vector>

#include "s2s/s2s.hpp"

int main() {
  using namespace s2s;

  // --- Character-mode global alignment -------------------------------
  CharSeq a = tokenize_chars("GATTACA");
  CharSeq b = tokenize_chars("GCATGCU");
  auto [score_fn, gap] = uniform_scoring(1.0, -1.0, -1.0);

  auto global = global_align(a, b, score_fn, gap);
  RenderOptions opts;
  opts.marker_row = true;
  std::cout << "global alignment of GATTACA vs GCATGCU (score "
            << global.score << "):\n"
            << render_alignment(global, opts) << "\n\n";

  // --- Token-mode alignment ------------------------------------------
  TokenSeq ta = tokenize_whitespace("the quick brown fox jumps");
  TokenSeq tb = tokenize_whitespace("the brown dog jumps high");
  auto tglobal = global_align(ta, tb, score_fn, gap);
  std::cout << "token alignment (score " << tglobal.score << "):\n"
            << render_alignment(tglobal, opts) << "\n\n";

  // --- Local alignment ------------------------------------------------
  CharSeq la = tokenize_chars("TGTTACGG");
  CharSeq lb = tokenize_chars("GGTTGACTA");
  auto [lscore, lgap] = uniform_scoring(3.0, -3.0, -2.0);
  auto local = local_align(la, lb, lscore, lgap);
  std::cout << "best local region of TGTTACGG vs GGTTGACTA (score "
            << local.score << "):\n"
            << render_alignment(local, opts) << "\n\n";

  // --- Common substructure --------------------------------------------
  auto sub = longest_common_substring(a, b);
  auto seq = longest_common_subsequence(a, b);
  std::cout << "longest common substring length: " << sub.length << "\n";
  std::cout << "longest common subsequence length: " << seq.length << "\n\n";

  // --- Distances and similarities --------------------------------------
  CharSeq ka = tokenize_chars("kitten");
  CharSeq kb = tokenize_chars("sitting");
  std::cout << "levenshtein(kitten, sitting) = " << levenshtein(ka, kb).value
            << "\n";
  std::cout << "damerau(ca, abc)             = "
            << damerau_levenshtein(tokenize_chars("ca"), tokenize_chars("abc"))
                   .value
            << "\n";
  std::cout << "jaccard distance(abc, bcd)   = "
            << jaccard_distance(tokenize_chars("abc"), tokenize_chars("bcd")).value
            << "\n";
  std::cout << "jaro(MARTHA, MARHTA)         = "
            << jaro(tokenize_chars("MARTHA"), tokenize_chars("MARHTA")) << "\n";
  std::cout << "jaro-winkler(MARTHA, MARHTA) = "
            << jaro_winkler(tokenize_chars("MARTHA"), tokenize_chars("MARHTA"))
            << "\n";

  // --- Dynamic time warping --------------------------------------------
  std::vector<double> s1{1.0, 2.0, 3.0};
  std::vector<double> s2{1.0, 2.0, 2.0, 3.0};
  auto warp = dtw(s1, s2, AbsCost{});
  std::cout << "dtw([1,2,3], [1,2,2,3]) cost = " << warp.total_cost
            << " over " << warp.path.size() << " steps\n";
  return 0;
}
