#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpipm/instance.hpp"

namespace gpipm {

/// A strictly feasible point of the lifted epigraph domain. The x block is
/// stored in subspace coordinates (dimension m), never in R^n.
struct InteriorPoint {
  Eigen::VectorXd x;  // m
  Eigen::VectorXd z;  // k
  double t = 0.0;
};

struct FeasibilityReport {
  double min_slack = 0.0;                 // smallest constraint slack
  std::vector<std::string> violations;    // empty iff strictly feasible
  bool feasible() const { return violations.empty(); }
};

/// The lifted domain over which the objective t is minimized:
///
///   z_i > 0,  sum z_i < 1,  t < t_max,
///   log z_i - <w_i - shift, x> + t - log q_i > 0   (epigraph slacks),
///   ||x||_2 < R                                     (only when a radius is set),
///
/// together with its logarithmic self-concordant barrier
///
///   Psi(x,z,t) = -sum log z_i - sum log(slack_i) - log(t_max - t)
///                - log(1 - sum z_i) [- log(R^2 - ||x||^2)],
///
/// with complexity parameter 2k+3 (with radius) or 2k+2 (without).
/// t_max = log(5 k ||q||_1). Immutable and shareable across threads.
class DomainSpec {
 public:
  /// Domain without the norm constraint; requires (lazily) that the shift be
  /// in the relative interior of the exponent polytope.
  static DomainSpec well_conditioned(GpInstance inst);

  /// Domain with the additional ball constraint ||x|| < radius.
  static DomainSpec with_radius(GpInstance inst, double radius);

  const GpInstance& instance() const { return inst_; }
  const SubspaceBasis& basis() const { return basis_; }
  std::optional<double> radius() const { return radius_; }
  double t_max() const { return t_max_; }

  Eigen::Index subspace_dim() const { return basis_.dim(); }   // m
  Eigen::Index term_count() const { return inst_.term_count(); }  // k
  Eigen::Index dim() const { return subspace_dim() + term_count() + 1; }

  /// 2k+3 with the ball constraint, 2k+2 without.
  int complexity_parameter() const;

  /// The canonical starting point (0; 1/2k, ..., 1/2k; log(4k||q||_1)).
  InteriorPoint default_start() const;

  FeasibilityReport feasibility(const InteriorPoint& p) const;
  bool strictly_feasible(const InteriorPoint& p) const;

  /// Barrier value; throws FeasibilityError off the domain.
  double barrier_value(const InteriorPoint& p) const;

  /// Analytic gradient/Hessian of the barrier in stacked (x, z, t) coordinates.
  Eigen::VectorXd barrier_gradient(const InteriorPoint& p) const;
  Eigen::MatrixXd barrier_hessian(const InteriorPoint& p) const;

  /// sqrt(v^T H(p) v).
  double local_norm(const InteriorPoint& p, const Eigen::VectorXd& v) const;

  /// || H(p)^-1 (eta c + g(p)) ||_(p) for the objective direction c = e_t.
  double newton_decrement(const InteriorPoint& p, double eta) const;

  /// Full Newton step for eta <c, .> + Psi. Throws StepError (carrying the
  /// decrement) if the step lands outside the domain.
  InteriorPoint newton_step(const InteriorPoint& p, double eta, bool* ridge_used = nullptr) const;

  /// Generalized forms taking an arbitrary linear term v in place of eta c
  /// (the preliminary stage follows the path of -mu g0 + Psi).
  double newton_decrement_for(const InteriorPoint& p, const Eigen::VectorXd& linear) const;
  InteriorPoint newton_step_for(const InteriorPoint& p, const Eigen::VectorXd& linear,
                                bool* ridge_used = nullptr) const;

  /// Objective direction c = (0, ..., 0; 0, ..., 0; 1).
  Eigen::VectorXd objective_direction() const;

  Eigen::VectorXd pack(const InteriorPoint& p) const;
  InteriorPoint unpack(const Eigen::VectorXd& stacked) const;

  /// Epigraph slacks log z_i - <w_i - shift, x> + t - log q_i.
  Eigen::VectorXd epigraph_slacks(const InteriorPoint& p) const;

  /// Ambient-space vector for the x block of a point.
  Eigen::VectorXd lift_x(const InteriorPoint& p) const { return basis_.lift(p.x); }

 private:
  DomainSpec(GpInstance inst, std::optional<double> radius);

  /// Solves H d = rhs by LLT; on factorization failure retries once with the
  /// ridge 1e-12 trace(H)/dim added to the diagonal and reports it.
  Eigen::VectorXd solve_newton_system(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& rhs,
                                      bool* ridge_used) const;

  GpInstance inst_;
  SubspaceBasis basis_;
  std::optional<double> radius_;
  double t_max_ = 0.0;
  Eigen::MatrixXd reduced_;   // k x m rows u_i = B^T (w_i - shift)
  Eigen::VectorXd log_q_;     // k
};

}  // namespace gpipm
