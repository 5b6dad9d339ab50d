#ifndef XLQE_SCORING_HPP
#define XLQE_SCORING_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "xlqe/alignment.hpp"
#include "xlqe/common.hpp"

namespace xlqe {

struct SentencePairRecord;

enum class Variant { Base, Align, Ppl, AlignPpl };
enum class Measure { F, P, R };
enum class GenScoreSign { AsIs, Negated };

Variant parse_variant(std::string_view name);
Measure parse_measure(std::string_view name);
GenScoreSign parse_gen_score_sign(std::string_view name);
std::string to_string(Variant v);
std::string to_string(Measure m);
std::string to_string(GenScoreSign s);

inline bool uses_alignment(Variant v) { return v == Variant::Align || v == Variant::AlignPpl; }
inline bool uses_generation_score(Variant v) { return v == Variant::Ppl || v == Variant::AlignPpl; }

struct ScoreConfig {
  Variant variant = Variant::Base;
  double penalty_a = 0.8;
  double lambda = 0.01;
  Measure measure = Measure::F;
  bool normalize_embeddings = false;
  GenScoreSign gen_score_sign = GenScoreSign::AsIs;

  /// Throws InvalidArgument when penalty_a or lambda leave [0, 1].
  void validate() const;
};

/// k x l matrix of source/candidate token similarities. Entries are finite.
template <typename Scalar>
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(DenseMatrix<Scalar> values) : values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
      throw InvalidArgument("similarity matrix must be non-empty");
    }
    if (!values_.allFinite()) {
      throw InvalidArgument("similarity matrix contains non-finite entries");
    }
  }

  const DenseMatrix<Scalar>& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  SimilarityMatrix transpose() const { return SimilarityMatrix(values_.transpose()); }

 private:
  DenseMatrix<Scalar> values_;
};

template <typename Scalar>
struct BasicQEScore {
  Scalar precision{};
  Scalar recall{};
  Scalar f_score{};
  Scalar final{};
  Variant variant = Variant::Base;
};

using QEScore = BasicQEScore<double>;

/// Dot-product similarity between every source row and every candidate row. With
/// `normalize`, rows are first scaled to unit length (cosine similarity).
template <typename DerivedSrc, typename DerivedMt>
SimilarityMatrix<typename DerivedSrc::Scalar> similarity_matrix(
    const Eigen::MatrixBase<DerivedSrc>& src, const Eigen::MatrixBase<DerivedMt>& mt,
    bool normalize = false) {
  using Scalar = typename DerivedSrc::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedMt::Scalar>,
                "source and candidate embeddings must share a scalar type");
  if (src.rows() == 0 || mt.rows() == 0) {
    throw InvalidArgument("embedding matrices must be non-empty");
  }
  if (src.cols() != mt.cols()) {
    throw InvalidArgument("embedding width mismatch: " + std::to_string(src.cols()) + " vs " +
                          std::to_string(mt.cols()));
  }
  if (!src.allFinite() || !mt.allFinite()) {
    throw InvalidArgument("embeddings contain non-finite values");
  }
  if (!normalize) {
    return SimilarityMatrix<Scalar>(src * mt.transpose());
  }
  const DenseVector<Scalar> src_norms = src.rowwise().norm();
  const DenseVector<Scalar> mt_norms = mt.rowwise().norm();
  if ((src_norms.array() == Scalar(0)).any() || (mt_norms.array() == Scalar(0)).any()) {
    throw InvalidArgument("cannot normalize a zero-norm embedding row");
  }
  const DenseMatrix<Scalar> src_unit = src_norms.cwiseInverse().asDiagonal() * src;
  const DenseMatrix<Scalar> mt_unit = mt_norms.cwiseInverse().asDiagonal() * mt;
  return SimilarityMatrix<Scalar>(src_unit * mt_unit.transpose());
}

/// Harmonic mean of precision and recall; 0 when p + r == 0.
///
/// For positive inputs this uses the reciprocal form 2 / (1/p + 1/r), every step of
/// which is monotone under IEEE rounding, so F never decreases when p and r do not.
template <typename Scalar>
Scalar harmonic_mean(Scalar p, Scalar r) {
  if (p + r == Scalar(0)) return Scalar(0);
  if (p > Scalar(0) && r > Scalar(0)) {
    return Scalar(2) / (Scalar(1) / p + Scalar(1) / r);
  }
  return Scalar(2) * p * r / (p + r);
}

template <typename Scalar>
Scalar select_measure(const BasicQEScore<Scalar>& s, Measure measure) {
  switch (measure) {
    case Measure::P:
      return s.precision;
    case Measure::R:
      return s.recall;
    case Measure::F:
      break;
  }
  return s.f_score;
}

/// Greedy-matching partners. Ties resolve to the lowest index.
struct GreedyMatches {
  std::vector<Eigen::Index> src_to_mt;
  std::vector<Eigen::Index> mt_to_src;
};

template <typename Scalar>
GreedyMatches greedy_matches(const SimilarityMatrix<Scalar>& sim) {
  const auto& s = sim.values();
  GreedyMatches out;
  out.src_to_mt.assign(static_cast<std::size_t>(s.rows()), 0);
  out.mt_to_src.assign(static_cast<std::size_t>(s.cols()), 0);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 1; j < s.cols(); ++j) {
      if (s(i, j) > s(i, out.src_to_mt[i])) out.src_to_mt[i] = j;
    }
  }
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 1; i < s.rows(); ++i) {
      if (s(i, j) > s(out.mt_to_src[j], j)) out.mt_to_src[j] = i;
    }
  }
  return out;
}

namespace detail {

// Left-to-right mean, so row and column reductions accumulate in the same order.
template <typename Scalar>
Scalar sequential_mean(const DenseVector<Scalar>& v) {
  Scalar sum(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += v(i);
  return sum / static_cast<Scalar>(v.size());
}

}  // namespace detail

/// Greedy-matched recall (mean of row maxima), precision (mean of column maxima) and F.
template <typename Scalar>
BasicQEScore<Scalar> bertscore(const SimilarityMatrix<Scalar>& sim, Measure measure = Measure::F) {
  const auto& s = sim.values();
  const DenseVector<Scalar> row_max = s.rowwise().maxCoeff();
  const DenseVector<Scalar> col_max = s.colwise().maxCoeff().transpose();
  BasicQEScore<Scalar> out;
  out.recall = detail::sequential_mean(row_max);
  out.precision = detail::sequential_mean(col_max);
  out.f_score = harmonic_mean(out.precision, out.recall);
  out.final = select_measure(out, measure);
  out.variant = Variant::Base;
  return out;
}

/// Average of the raw similarities and their mask-weighted copy: (S + M .* S) / 2.
template <typename Scalar>
SimilarityMatrix<Scalar> renewed_similarity(const SimilarityMatrix<Scalar>& sim,
                                            const MaskMatrix<Scalar>& mask) {
  if (sim.rows() != mask.rows() || sim.cols() != mask.cols()) {
    throw InvalidArgument("mask shape " + std::to_string(mask.rows()) + "x" +
                          std::to_string(mask.cols()) + " does not match similarity shape " +
                          std::to_string(sim.rows()) + "x" + std::to_string(sim.cols()));
  }
  const auto& s = sim.values();
  return SimilarityMatrix<Scalar>((s + mask.values().cwiseProduct(s)) / Scalar(2));
}

/// Greedy matching on the renewed matrix. Both matching directions see the mask.
template <typename Scalar>
BasicQEScore<Scalar> masked_bertscore(const SimilarityMatrix<Scalar>& sim,
                                      const MaskMatrix<Scalar>& mask,
                                      Measure measure = Measure::F) {
  auto out = bertscore(renewed_similarity(sim, mask), measure);
  out.variant = Variant::Align;
  return out;
}

/// (1 - lambda) * f_value + lambda * gen_score.
template <typename Scalar>
Scalar combine_generation_score(Scalar f_value, Scalar gen_score, Scalar lambda) {
  if (!(lambda >= Scalar(0) && lambda <= Scalar(1))) {
    throw InvalidArgument("interpolation weight lambda must lie in [0, 1]");
  }
  if (!std::isfinite(f_value) || !std::isfinite(gen_score)) {
    throw InvalidArgument("generation-score interpolation requires finite inputs");
  }
  return (Scalar(1) - lambda) * f_value + lambda * gen_score;
}

/// Per-record state that does not depend on penalty or lambda. Sweeps build it once
/// and rescore it for every parameter value.
struct PreparedPair {
  SimilarityMatrix<double> sim;
  AlignmentSet alignment;
  double gen_score = 0.0;
};

/// Builds the similarity matrix and parses the alignment (only when `parse_alignment`).
PreparedPair prepare_pair(const SentencePairRecord& record, bool normalize,
                          bool parse_alignment);

QEScore score_prepared(const PreparedPair& pair, const ScoreConfig& config);

/// Scores one record under the configured variant.
QEScore score_pair(const SentencePairRecord& record, const ScoreConfig& config);

}  // namespace xlqe

#endif  // XLQE_SCORING_HPP
