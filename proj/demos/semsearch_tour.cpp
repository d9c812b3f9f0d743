// Builds a tiny semantic search pipeline end to end: parse a word-vector
// table, pool token vectors into sentence vectors, build flat and IVF
// indexes, and run a few queries against both.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "s2s/s2s.hpp"

namespace {

std::vector<float> embed(const s2s::EmbeddingStore& store, const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (const auto& token : s2s::tokenize_whitespace(text)) {
    if (const auto* vec = store.lookup(token)) rows.push_back(*vec);
  }
  auto pooled = s2s::pool(rows, s2s::PoolMode::mean);
  return std::vector<float>(pooled.begin(), pooled.end());
}

}  // namespace

int main() {
  // A miniature word-vector table in the usual text layout.
  const std::string table =
      "cat 0.9 0.1 0.0\n"
      "dog 0.8 0.2 0.1\n"
      "fish 0.7 -0.1 0.3\n"
      "car 0.0 0.9 0.1\n"
      "bus 0.1 0.8 0.2\n"
      "train -0.1 0.9 0.3\n"
      "red 0.2 0.1 0.9\n"
      "blue 0.1 0.2 0.8\n";
  auto loaded = s2s::load_word_vectors(table);
  std::cout << "loaded " << loaded.store.size() << " word vectors of dimension "
            << loaded.store.dimension << "\n";

  const std::vector<std::string> corpus = {
      "cat dog",  "dog fish",  "car bus",   "bus train",
      "red blue", "cat fish",  "train car", "blue red",
  };
  std::vector<s2s::VectorRecord> records;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    records.push_back({corpus[i], embed(loaded.store, corpus[i])});
  }

  auto flat = s2s::flat_build(records, s2s::Metric::cosine);
  auto ivf = s2s::ivf_build(records, s2s::Metric::cosine, /*nlist=*/3, /*seed=*/7);

  const std::string query_text = "dog cat";
  auto q = embed(loaded.store, query_text);

  std::cout << "\nflat search for \"" << query_text << "\":\n";
  for (const auto& hit : s2s::flat_query(flat, q, 3)) {
    std::cout << "  " << hit.id << "  " << hit.score << "\n";
  }

  std::cout << "\nivf search (nprobe=1) for \"" << query_text << "\":\n";
  for (const auto& hit : s2s::ivf_query(ivf, q, 3, 1)) {
    std::cout << "  " << hit.id << "  " << hit.score << "\n";
  }

  // Round-trip the IVF index through its binary form.
  std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
  s2s::save_index(ivf, buffer);
  auto restored = s2s::load_index(buffer);
  auto again = s2s::query_index(restored, q, 3, ivf.nlist());
  std::cout << "\nreloaded index, full probe:\n";
  for (const auto& hit : again) {
    std::cout << "  " << hit.id << "  " << hit.score << "\n";
  }
  return 0;
}
