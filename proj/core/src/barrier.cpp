#include "gpipm/barrier.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "gpipm/errors.hpp"

namespace gpipm {

namespace {

// Slacks below this are treated as boundary contact (floating underflow
// guard; positivity itself is enforced by the barrier arithmetic).
constexpr double kSlackFloor = 1e-300;

}  // namespace

DomainSpec::DomainSpec(GpInstance inst, std::optional<double> radius)
    : inst_(std::move(inst)), radius_(radius) {
  if (radius_ && !(*radius_ > 0.0 && std::isfinite(*radius_)))
    throw InputError("domain radius must be positive and finite");
  basis_ = subspace_basis(inst_);
  const double k = static_cast<double>(inst_.term_count());
  t_max_ = std::log(5.0 * k * inst_.coefficients().sum());
  reduced_ = inst_.shifted_exponents() * basis_.basis;  // k x m
  log_q_ = inst_.coefficients().array().log();
}

DomainSpec DomainSpec::well_conditioned(GpInstance inst) {
  return DomainSpec(std::move(inst), std::nullopt);
}

DomainSpec DomainSpec::with_radius(GpInstance inst, double radius) {
  return DomainSpec(std::move(inst), radius);
}

int DomainSpec::complexity_parameter() const {
  return 2 * static_cast<int>(inst_.term_count()) + (radius_ ? 3 : 2);
}

InteriorPoint DomainSpec::default_start() const {
  const Eigen::Index k = term_count();
  InteriorPoint p;
  p.x = Eigen::VectorXd::Zero(subspace_dim());
  p.z = Eigen::VectorXd::Constant(k, 1.0 / (2.0 * static_cast<double>(k)));
  p.t = std::log(4.0 * static_cast<double>(k) * inst_.coefficients().sum());
  return p;
}

Eigen::VectorXd DomainSpec::epigraph_slacks(const InteriorPoint& p) const {
  return (p.z.array().log() - (reduced_ * p.x).array() + p.t - log_q_.array()).matrix();
}

FeasibilityReport DomainSpec::feasibility(const InteriorPoint& p) const {
  FeasibilityReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  auto note = [&](double slack, const std::string& what) {
    report.min_slack = std::min(report.min_slack, slack);
    if (!(slack > kSlackFloor)) report.violations.push_back(what);
  };

  if (p.x.size() != subspace_dim() || p.z.size() != term_count())
    throw InputError("point dimensions do not match the domain");

  for (Eigen::Index i = 0; i < p.z.size(); ++i)
    note(p.z(i), "z_" + std::to_string(i) + " not positive");
  note(1.0 - p.z.sum(), "sum z not below 1");
  note(t_max_ - p.t, "t not below t_max");
  if ((p.z.array() > 0.0).all()) {
    const Eigen::VectorXd s = epigraph_slacks(p);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      note(s(i), "epigraph slack " + std::to_string(i) + " not positive");
  }
  if (radius_) note(*radius_ * *radius_ - p.x.squaredNorm(), "x not inside the ball");
  return report;
}

bool DomainSpec::strictly_feasible(const InteriorPoint& p) const {
  return feasibility(p).feasible();
}

namespace {

[[noreturn]] void throw_infeasible(const FeasibilityReport& report) {
  std::ostringstream msg;
  msg << "point is not strictly feasible:";
  for (const auto& v : report.violations) msg << " [" << v << "]";
  throw FeasibilityError(msg.str());
}

}  // namespace

double DomainSpec::barrier_value(const InteriorPoint& p) const {
  const auto report = feasibility(p);
  if (!report.feasible()) throw_infeasible(report);
  const Eigen::ArrayXd s = epigraph_slacks(p).array();
  double value = -p.z.array().log().sum() - s.log().sum() - std::log(t_max_ - p.t) -
                 std::log(1.0 - p.z.sum());
  if (radius_) value -= std::log(*radius_ * *radius_ - p.x.squaredNorm());
  return value;
}

Eigen::VectorXd DomainSpec::barrier_gradient(const InteriorPoint& p) const {
  const auto report = feasibility(p);
  if (!report.feasible()) throw_infeasible(report);
  const Eigen::Index m = subspace_dim();
  const Eigen::Index k = term_count();
  const Eigen::ArrayXd s = epigraph_slacks(p).array();
  const Eigen::ArrayXd invs = s.inverse();
  const double sigma = 1.0 - p.z.sum();
  const double tau = t_max_ - p.t;

  Eigen::VectorXd g(dim());
  g.head(m) = reduced_.transpose() * invs.matrix();
  g.segment(m, k) = (-p.z.array().inverse() * (1.0 + invs) + 1.0 / sigma).matrix();
  g(m + k) = -invs.sum() + 1.0 / tau;
  if (radius_) {
    const double rho = *radius_ * *radius_ - p.x.squaredNorm();
    g.head(m) += 2.0 / rho * p.x;
  }
  return g;
}

Eigen::MatrixXd DomainSpec::barrier_hessian(const InteriorPoint& p) const {
  const auto report = feasibility(p);
  if (!report.feasible()) throw_infeasible(report);
  const Eigen::Index m = subspace_dim();
  const Eigen::Index k = term_count();
  const Eigen::ArrayXd s = epigraph_slacks(p).array();
  const Eigen::ArrayXd invs2 = s.inverse().square();
  const Eigen::ArrayXd invz = p.z.array().inverse();
  const double sigma = 1.0 - p.z.sum();
  const double tau = t_max_ - p.t;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim(), dim());
  auto xx = h.topLeftCorner(m, m);
  auto xz = h.block(0, m, m, k);
  auto xt = h.block(0, m + k, m, 1);
  auto zz = h.block(m, m, k, k);
  auto zt = h.block(m, m + k, k, 1);

  xx = reduced_.transpose() * invs2.matrix().asDiagonal() * reduced_;
  xz = -reduced_.transpose() * (invs2 * invz).matrix().asDiagonal();
  xt = -(reduced_.transpose() * invs2.matrix());
  zz = ((invz.square() * (1.0 + invs2 + s.inverse())).matrix()).asDiagonal();
  zz.array() += 1.0 / (sigma * sigma);
  zt = (invs2 * invz).matrix();
  h(m + k, m + k) = invs2.sum() + 1.0 / (tau * tau);

  if (radius_) {
    const double rho = *radius_ * *radius_ - p.x.squaredNorm();
    xx += 2.0 / rho * Eigen::MatrixXd::Identity(m, m);
    xx += 4.0 / (rho * rho) * p.x * p.x.transpose();
  }

  h.block(m, 0, k, m) = h.block(0, m, m, k).transpose();
  h.block(m + k, 0, 1, m) = h.block(0, m + k, m, 1).transpose();
  h.block(m + k, m, 1, k) = h.block(m, m + k, k, 1).transpose();
  return h;
}

Eigen::VectorXd DomainSpec::solve_newton_system(const Eigen::MatrixXd& hessian,
                                                const Eigen::VectorXd& rhs, bool* ridge_used) const {
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() == Eigen::Success) {
    if (ridge_used) *ridge_used = false;
    return llt.solve(rhs);
  }
  const double ridge = 1e-12 * hessian.trace() / static_cast<double>(dim());
  Eigen::MatrixXd damped = hessian;
  damped.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> retry(damped);
  if (retry.info() != Eigen::Success)
    throw NumericalError("Newton system factorization failed even with a ridge");
  if (ridge_used) *ridge_used = true;
  return retry.solve(rhs);
}

double DomainSpec::local_norm(const InteriorPoint& p, const Eigen::VectorXd& v) const {
  if (v.size() != dim()) throw InputError("vector dimension does not match the domain");
  const Eigen::MatrixXd h = barrier_hessian(p);
  return std::sqrt(std::max(0.0, v.dot(h * v)));
}

Eigen::VectorXd DomainSpec::objective_direction() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
  c(dim() - 1) = 1.0;
  return c;
}

double DomainSpec::newton_decrement_for(const InteriorPoint& p, const Eigen::VectorXd& linear) const {
  const Eigen::VectorXd rhs = linear + barrier_gradient(p);
  const Eigen::VectorXd d = solve_newton_system(barrier_hessian(p), rhs, nullptr);
  return std::sqrt(std::max(0.0, d.dot(rhs)));
}

double DomainSpec::newton_decrement(const InteriorPoint& p, double eta) const {
  return newton_decrement_for(p, eta * objective_direction());
}

InteriorPoint DomainSpec::newton_step_for(const InteriorPoint& p, const Eigen::VectorXd& linear,
                                          bool* ridge_used) const {
  const Eigen::Index m = subspace_dim();
  const Eigen::Index k = term_count();
  const Eigen::VectorXd rhs = linear + barrier_gradient(p);
  const Eigen::VectorXd d = solve_newton_system(barrier_hessian(p), rhs, ridge_used);

  InteriorPoint next;
  next.x = p.x - d.head(m);
  next.z = p.z - d.segment(m, k);
  next.t = p.t - d(m + k);
  if (!strictly_feasible(next)) {
    const double decrement = std::sqrt(std::max(0.0, d.dot(rhs)));
    throw StepError("Newton step left the domain (decrement " + std::to_string(decrement) + ")",
                    decrement);
  }
  return next;
}

InteriorPoint DomainSpec::newton_step(const InteriorPoint& p, double eta, bool* ridge_used) const {
  return newton_step_for(p, eta * objective_direction(), ridge_used);
}

Eigen::VectorXd DomainSpec::pack(const InteriorPoint& p) const {
  Eigen::VectorXd v(dim());
  v.head(subspace_dim()) = p.x;
  v.segment(subspace_dim(), term_count()) = p.z;
  v(dim() - 1) = p.t;
  return v;
}

InteriorPoint DomainSpec::unpack(const Eigen::VectorXd& stacked) const {
  if (stacked.size() != dim()) throw InputError("stacked point has the wrong dimension");
  InteriorPoint p;
  p.x = stacked.head(subspace_dim());
  p.z = stacked.segment(subspace_dim(), term_count());
  p.t = stacked(dim() - 1);
  return p;
}

}  // namespace gpipm
