// Random valid interchange records and file helpers for tests.
#ifndef XLQE_TESTS_RECORD_GEN_HPP
#define XLQE_TESTS_RECORD_GEN_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xlqe/alignment.hpp"
#include "xlqe/record.hpp"

namespace testgen {

inline std::string random_token(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{"▁the", "##ing", "Назва", "名字", "a\"b", "x\\y",
                                               "tab\there", "ü", "▁", "42"};
  return pieces[rng() % pieces.size()] + std::to_string(rng() % 100);
}

inline xlqe::SentencePairRecord random_record(std::mt19937_64& rng, const std::string& id) {
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  std::uniform_real_distribution<double> exponent(-8.0, 4.0);
  const std::size_t k = 1 + rng() % 6, l = 1 + rng() % 6, d = 1 + rng() % 8;
  xlqe::SentencePairRecord r;
  r.id = id;
  for (std::size_t i = 0; i < k; ++i) r.src_tokens.push_back(random_token(rng));
  for (std::size_t i = 0; i < l; ++i) r.mt_tokens.push_back(random_token(rng));
  auto fill = [&](xlqe::MatrixXd& m, std::size_t rows) {
    m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = value(rng) * std::pow(10.0, exponent(rng));
  };
  fill(r.src_embeddings, k);
  fill(r.mt_embeddings, l);
  xlqe::AlignmentSet align;
  const std::size_t links = rng() % (k * l + 1);
  for (std::size_t n = 0; n < links; ++n) align.insert({rng() % k, rng() % l});
  r.alignment = xlqe::to_pharaoh(align);
  r.gen_score = -std::abs(value(rng)) * 3;
  if (rng() % 3 != 0) r.da_score = value(rng) * 30;
  r.meta = {rng() % 2 ? "bert-base-multilingual-cased" : "xlm-mlm-100-1280",
            static_cast<long>(rng() % 16), d};
  return r;
}

inline std::filesystem::path temp_path(const std::string& name) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("xlqe-test-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testgen

#endif  // XLQE_TESTS_RECORD_GEN_HPP
