#include "gpipm/instance.hpp"

#include <cmath>

#include "gpipm/errors.hpp"

namespace gpipm {

namespace {

void require_finite(const Eigen::VectorXd& x, const char* what) {
  if (!x.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

}  // namespace

GpInstance::GpInstance(Eigen::MatrixXd exponents, Eigen::VectorXd coefficients,
                       Eigen::VectorXd shift, std::optional<RationalForm> rational)
    : exponents_(std::move(exponents)),
      coefficients_(std::move(coefficients)),
      shift_(std::move(shift)),
      rational_(std::move(rational)) {
  validate();
  shifted_ = exponents_.rowwise() - shift_.transpose();
}

void GpInstance::validate() const {
  if (exponents_.rows() < 1) throw InputError("instance needs at least one exponent");
  if (exponents_.cols() != shift_.size())
    throw InputError("shift dimension does not match the exponents");
  if (coefficients_.size() != exponents_.rows())
    throw InputError("coefficient count does not match the exponent count");
  if (!(coefficients_.array() > 0.0).all())
    throw InputError("coefficients must be strictly positive");
  if (!exponents_.allFinite() || !coefficients_.allFinite() || !shift_.allFinite())
    throw InputError("instance data must be finite");
  if (rational_) {
    const auto k = static_cast<std::size_t>(exponents_.rows());
    if (rational_->exponents.size() != k)
      throw InputError("rational form has the wrong number of exponents");
    for (Eigen::Index i = 0; i < exponents_.rows(); ++i) {
      const Eigen::VectorXd row = exponents_.row(i);
      if (!matches_double(rational_->exponents[static_cast<std::size_t>(i)], row.data(),
                          static_cast<std::size_t>(row.size())))
        throw InputError("rational exponents disagree with the floating-point data");
    }
    if (!matches_double(rational_->shift, shift_.data(), static_cast<std::size_t>(shift_.size())))
      throw InputError("rational shift disagrees with the floating-point data");
  }
}

double GpInstance::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw InputError("point dimension does not match the instance");
  require_finite(x, "evaluation point");
  const Eigen::ArrayXd s = (shifted_ * x).array() + coefficients_.array().log();
  const double top = s.maxCoeff();
  return top + std::log((s - top).exp().sum());
}

Eigen::VectorXd GpInstance::term_weights(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw InputError("point dimension does not match the instance");
  require_finite(x, "evaluation point");
  const Eigen::ArrayXd s = (shifted_ * x).array() + coefficients_.array().log();
  Eigen::ArrayXd w = (s - s.maxCoeff()).exp();
  return (w / w.sum()).matrix();
}

Eigen::VectorXd GpInstance::gradient(const Eigen::VectorXd& x) const {
  return shifted_.transpose() * term_weights(x);
}

Eigen::MatrixXd GpInstance::hessian(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd w = term_weights(x);
  const Eigen::VectorXd g = shifted_.transpose() * w;
  Eigen::MatrixXd second = shifted_.transpose() * w.asDiagonal() * shifted_;
  second.noalias() -= g * g.transpose();
  return second;
}

double GpInstance::enclosing_radius() const { return shifted_.rowwise().norm().maxCoeff(); }

double GpInstance::coefficient_ratio() const {
  return coefficients_.sum() / coefficients_.minCoeff();
}

GpInstance GpInstance::with_shift(Eigen::VectorXd shift, std::optional<RationalForm> rational) const {
  return GpInstance(exponents_, coefficients_, std::move(shift), std::move(rational));
}

SubspaceBasis subspace_basis(const GpInstance& inst) {
  const Eigen::MatrixXd& d = inst.shifted_exponents();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * top) ++rank;
  return SubspaceBasis{svd.matrixV().leftCols(rank)};
}

double affine_hull_residual(const Eigen::MatrixXd& exponents, const Eigen::VectorXd& v) {
  if (v.size() != exponents.cols()) throw InputError("dimension mismatch in affine residual");
  const Eigen::RowVectorXd mean = exponents.colwise().mean();
  const Eigen::MatrixXd centered = exponents.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * top) ++rank;
  const Eigen::MatrixXd basis = svd.matrixV().leftCols(rank);
  const Eigen::VectorXd rel = v - mean.transpose();
  return (rel - basis * (basis.transpose() * rel)).norm();
}

}  // namespace gpipm
