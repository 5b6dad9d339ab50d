#ifndef XLQE_COMMON_HPP
#define XLQE_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace xlqe {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = DenseMatrix<double>;
using VectorXd = DenseVector<double>;

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: out-of-range parameters, mismatched shapes, malformed text.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input whose content cannot be processed (bad records, id mismatches,
/// undefined statistics).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace xlqe

#endif  // XLQE_COMMON_HPP
