#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace rarc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (non-square input, wrong ambient shape, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Thin QR on a matrix without full column rank.
class RankError : public Error {
 public:
  RankError(const std::string& what, Eigen::Index column)
      : Error(what), column_(column) {}
  Eigen::Index column() const noexcept { return column_; }

 private:
  Eigen::Index column_;
};

/// Points or tangent vectors used with the wrong base point or manifold.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The manifold does not provide the requested map (exp / transport).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// Geometric construction failed numerically (e.g. tangent basis extraction).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The objective returned a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, Eigen::MatrixXd point)
      : Error(what), point_(std::move(point)) {}
  const Eigen::MatrixXd& point() const noexcept { return point_; }

 private:
  Eigen::MatrixXd point_;
};

/// The objective lacks a derivative that the requested variant needs.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Root finding or another inner iteration broke down.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Neither the secular solver nor the CG fallback met the model conditions.
class SubsolverFailure : public Error {
 public:
  SubsolverFailure(const std::string& what, double grad_norm, double threshold)
      : Error(what), grad_norm_(grad_norm), threshold_(threshold) {}
  double grad_norm() const noexcept { return grad_norm_; }
  /// theta * |v|^2 at the returned point.
  double threshold() const noexcept { return threshold_; }

 private:
  double grad_norm_;
  double threshold_;
};

}  // namespace rarc
