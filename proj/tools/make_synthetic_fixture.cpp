// Generates synthetic interchange files: each candidate is a copy of its source with
// 0-8 embedding rows replaced by unrelated random vectors. The DA score of a pair is
// 8 minus its corruption count, so a sound scorer should rank pairs by it.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include "xlqe/alignment.hpp"
#include "xlqe/embedding_io.hpp"

namespace {

xlqe::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  xlqe::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
  return v.normalized();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic interchange fixture generator"};
  std::size_t pairs = 200;
  std::uint64_t seed = 20201;
  Eigen::Index dim = 16;
  int max_corruptions = 8;
  std::string output, gold;
  app.add_option("--pairs", pairs)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--dim", dim)->capture_default_str();
  app.add_option("--max-corruptions", max_corruptions)->capture_default_str();
  app.add_option("--output", output)->required();
  app.add_option("--gold", gold, "Also write an (id, da) TSV");
  CLI11_PARSE(app, argc, argv);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length_dist(std::max(8, max_corruptions), 12);
  std::uniform_int_distribution<int> corruption_dist(0, max_corruptions);
  std::normal_distribution<double> gen_noise(0.0, 0.1);

  std::vector<xlqe::SentencePairRecord> records;
  for (std::size_t p = 0; p < pairs; ++p) {
    const int k = length_dist(rng);
    const int corrupted = corruption_dist(rng);

    xlqe::SentencePairRecord r;
    r.id = "pair-" + std::to_string(p);
    r.src_embeddings.resize(k, dim);
    for (int i = 0; i < k; ++i) {
      r.src_tokens.push_back("s" + std::to_string(p) + "_" + std::to_string(i));
      r.mt_tokens.push_back("t" + std::to_string(p) + "_" + std::to_string(i));
      r.src_embeddings.row(i) = random_unit(rng, dim).transpose();
    }
    r.mt_embeddings = r.src_embeddings;

    std::vector<int> rows(static_cast<std::size_t>(k));
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(static_cast<std::size_t>(corrupted));
    std::sort(rows.begin(), rows.end());

    xlqe::AlignmentSet align;
    for (int i = 0; i < k; ++i) {
      if (std::binary_search(rows.begin(), rows.end(), i)) {
        r.mt_embeddings.row(i) = random_unit(rng, dim).transpose();
      } else {
        align.insert({static_cast<std::size_t>(i), static_cast<std::size_t>(i)});
      }
    }
    r.alignment = xlqe::to_pharaoh(align);
    r.gen_score = -1.0 - 0.2 * corrupted + gen_noise(rng);
    r.da_score = static_cast<double>(max_corruptions - corrupted);
    r.meta = {"synthetic", 9, static_cast<std::size_t>(dim)};
    records.push_back(std::move(r));
  }

  xlqe::write_records(records, output);
  if (!gold.empty()) {
    std::ofstream out(gold);
    out << "id\tda\n";
    for (const auto& r : records) out << r.id << "\t" << *r.da_score << "\n";
  }
  return 0;
}
