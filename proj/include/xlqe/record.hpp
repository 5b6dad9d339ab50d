#ifndef XLQE_RECORD_HPP
#define XLQE_RECORD_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "xlqe/common.hpp"

namespace xlqe {

struct RecordMeta {
  std::string model;
  long layer = 0;
  std::size_t dim = 0;

  friend bool operator==(const RecordMeta&, const RecordMeta&) = default;
};

/// One scoring unit: a source sentence and its candidate translation, each as subword
/// tokens with one contextual embedding row per token.
struct SentencePairRecord {
  std::string id;
  std::vector<std::string> src_tokens;
  std::vector<std::string> mt_tokens;
  MatrixXd src_embeddings;  // k x d
  MatrixXd mt_embeddings;   // l x d
  std::string alignment;    // Pharaoh text, 0-based
  double gen_score = 0.0;
  std::optional<double> da_score;
  RecordMeta meta;

  std::size_t k() const { return src_tokens.size(); }
  std::size_t l() const { return mt_tokens.size(); }
  std::size_t d() const { return static_cast<std::size_t>(src_embeddings.cols()); }
};

bool operator==(const SentencePairRecord& a, const SentencePairRecord& b);

}  // namespace xlqe

#endif  // XLQE_RECORD_HPP
