#pragma once

#include <optional>

#include <Eigen/Dense>

#include "gpipm/rational.hpp"

namespace gpipm {

/// Orthonormal basis of the effective optimization space W, the linear span
/// of the shifted exponents. Columns are orthonormal vectors in R^n; the
/// polytope may be lower-dimensional, in which case dim() < n. dim() == 0 is
/// legal and means the span is trivial.
struct SubspaceBasis {
  Eigen::MatrixXd basis;  // n x m, orthonormal columns

  Eigen::Index ambient_dim() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }

  /// Coordinates of an ambient vector in the subspace.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const { return basis.transpose() * v; }

  /// Ambient vector for subspace coordinates.
  Eigen::VectorXd lift(const Eigen::VectorXd& w) const { return basis * w; }

  /// Norm of the component of v orthogonal to the subspace.
  double residual(const Eigen::VectorXd& v) const { return (v - basis * (basis.transpose() * v)).norm(); }
};

/// One unconstrained geometric program after the log change of variables:
///
///   F(x) = log sum_i q_i exp(<w_i - shift, x>),
///
/// given by the exponent rows w_i (k x n), positive coefficients q, and the
/// shift vector. Duplicate exponent rows are permitted and never merged.
class GpInstance {
 public:
  GpInstance() = default;
  GpInstance(Eigen::MatrixXd exponents, Eigen::VectorXd coefficients, Eigen::VectorXd shift,
             std::optional<RationalForm> rational = std::nullopt);

  Eigen::Index term_count() const { return exponents_.rows(); }  // k
  Eigen::Index dim() const { return exponents_.cols(); }         // n

  const Eigen::MatrixXd& exponents() const { return exponents_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const Eigen::VectorXd& shift() const { return shift_; }
  const std::optional<RationalForm>& rational_form() const { return rational_; }

  /// Exponent rows with the shift subtracted (k x n).
  const Eigen::MatrixXd& shifted_exponents() const { return shifted_; }

  /// Objective value, stabilized with max subtraction so that any finite x
  /// with |<w_i - shift, x>| up to ~1e8 evaluates without overflow.
  double value(const Eigen::VectorXd& x) const;

  /// Softmax weights of the terms at x; positive entries summing to one.
  Eigen::VectorXd term_weights(const Eigen::VectorXd& x) const;

  /// Gradient of the objective. gradient(x) + shift is always a convex
  /// combination of the exponent rows.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  /// Hessian of the objective: weighted second moment minus the gradient
  /// outer product. Positive semidefinite with eigenvalues at most
  /// enclosing_radius()^2.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// max_i ||w_i - shift||_2 (radius of the smallest enclosing ball).
  double enclosing_radius() const;

  /// ||q||_1 / min_i q_i.
  double coefficient_ratio() const;

  /// Returns a copy with the shift replaced (rational form dropped unless
  /// a replacement is supplied).
  GpInstance with_shift(Eigen::VectorXd shift, std::optional<RationalForm> rational = std::nullopt) const;

 private:
  void validate() const;

  Eigen::MatrixXd exponents_;     // k x n
  Eigen::VectorXd coefficients_;  // k
  Eigen::VectorXd shift_;         // n
  Eigen::MatrixXd shifted_;       // k x n
  std::optional<RationalForm> rational_;
};

/// Orthonormal basis of span{w_i - shift} via SVD; singular values below
/// 1e-10 times the largest are treated as zero.
SubspaceBasis subspace_basis(const GpInstance& inst);

/// Distance from v to the affine hull of the exponent rows.
double affine_hull_residual(const Eigen::MatrixXd& exponents, const Eigen::VectorXd& v);

}  // namespace gpipm
