#ifndef XLQE_ALIGNMENT_HPP
#define XLQE_ALIGNMENT_HPP

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "xlqe/common.hpp"

namespace xlqe {

/// One alignment link between source token `src` and candidate token `mt` (0-based).
struct AlignmentLink {
  std::size_t src = 0;
  std::size_t mt = 0;

  friend auto operator<=>(const AlignmentLink&, const AlignmentLink&) = default;
};

/// Set of aligned (source, candidate) token index pairs. Ordered, duplicate-free.
using AlignmentSet = std::set<AlignmentLink>;

enum class SymmetrizeMode { Union, Intersection };

/// Parses one line of Pharaoh alignment text ("0-0 1-2 ..."). Duplicates collapse.
/// Throws InvalidArgument naming the first malformed token.
AlignmentSet parse_pharaoh(std::string_view line);

/// Sorted Pharaoh rendering of an alignment set; parse_pharaoh inverts it.
std::string to_pharaoh(const AlignmentSet& align);

/// Combines two directional alignments already expressed in (source, candidate) orientation.
AlignmentSet symmetrize(const AlignmentSet& forward, const AlignmentSet& backward,
                        SymmetrizeMode mode = SymmetrizeMode::Union);

SymmetrizeMode parse_symmetrize_mode(std::string_view name);

/// k x l penalty mask: 1 on aligned cells, `penalty` everywhere else.
template <typename Scalar>
class MaskMatrix {
 public:
  MaskMatrix(DenseMatrix<Scalar> values, Scalar penalty)
      : values_(std::move(values)), penalty_(penalty) {}

  const DenseMatrix<Scalar>& values() const { return values_; }
  Scalar penalty() const { return penalty_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

 private:
  DenseMatrix<Scalar> values_;
  Scalar penalty_;
};

/// Builds the alignment mask for a k-token source and l-token candidate.
/// Out-of-range links are errors, never silently dropped.
template <typename Scalar = double>
MaskMatrix<Scalar> build_mask(const AlignmentSet& align, std::size_t k, std::size_t l,
                              Scalar penalty) {
  if (!(penalty >= Scalar(0) && penalty <= Scalar(1))) {
    throw InvalidArgument("penalty weight must lie in [0, 1], got " +
                          std::to_string(static_cast<double>(penalty)));
  }
  DenseMatrix<Scalar> values =
      DenseMatrix<Scalar>::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l),
                                    penalty);
  for (const auto& link : align) {
    if (link.src >= k || link.mt >= l) {
      throw InvalidArgument("alignment index out of range: pair " + std::to_string(link.src) +
                            "-" + std::to_string(link.mt) + " with bounds k=" +
                            std::to_string(k) + ", l=" + std::to_string(l));
    }
    values(static_cast<Eigen::Index>(link.src), static_cast<Eigen::Index>(link.mt)) = Scalar(1);
  }
  return MaskMatrix<Scalar>(std::move(values), penalty);
}

}  // namespace xlqe

#endif  // XLQE_ALIGNMENT_HPP
