#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpipm/barrier.hpp"
#include "gpipm/condition.hpp"
#include "gpipm/instance.hpp"

namespace gpipm {

enum class SolveMode { WellConditioned, General };

enum class Stage { Preliminary, Main };

struct TraceRow {
  Stage stage = Stage::Preliminary;
  long iter = 0;          // 1-based within the stage
  double parameter = 0.0; // mu_i (preliminary) or eta_i (main)
  double decrement = 0.0; // Newton decrement at the new iterate
  double objective_t = 0.0;
  double min_slack = 0.0;
  bool ridge_used = false;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  void add(TraceRow row) { rows.push_back(std::move(row)); }
};

struct SolveParams {
  double delta = 1e-3;                    // target objective precision, in (0,1)
  std::optional<double> epsilon;          // target gradient norm (scaling mode)
  std::optional<double> facet_gap_lower;  // phi_0, required by the general mode
  std::optional<long> max_iterations;     // safety cap across both stages
  bool trace_enabled = true;
  SolveMode mode = SolveMode::WellConditioned;

  // Overrides used by tests and by weak membership.
  std::optional<long> main_iterations;    // run exactly this many main iterations
  bool check_membership = true;           // general mode: verify shift in polytope when cheap

  void validate() const;
};

struct PreliminaryResult {
  InteriorPoint p0;
  double eta0 = 0.0;
  long iterations = 0;  // Newton steps taken, including the final eta_0 step
};

struct MainResult {
  InteriorPoint p;
  double eta = 0.0;
  long iterations = 0;
  double certified_gap = 0.0;  // (6/5) nu / eta at the final iterate
};

/// Centering stage: follows the path of -mu g(p_start) + Psi with
/// mu shrinking by (1 - 1/(8 sqrt(nu))) until the pure barrier decrement is
/// at most 1/6, then picks eta_0 = 1/(12 ||H^-1 c||_(p)) and takes one Newton
/// step for eta_0 c + Psi. The result satisfies decrement(p0, eta_0) <= 1/9.
/// Throws DivergenceError when the iteration cap is exceeded or slacks
/// collapse (a violated promise).
PreliminaryResult preliminary_stage(const DomainSpec& spec, const InteriorPoint& start,
                                    const SolveParams& params, IterationTrace* trace);

/// Path-following stage: grows eta by (1 + 1/(8 sqrt(nu))) with one Newton
/// step per value, starting from a point with decrement(p0, eta0) <= 1/9.
/// Stops as soon as the certified gap (6/5) nu / eta is at most delta (or
/// after params.main_iterations steps when set). A decrement above 1/4 at any
/// iterate throws NumericalError (contract violation).
MainResult main_stage(const DomainSpec& spec, const InteriorPoint& p0, double eta0, double delta,
                      const SolveParams& params, IterationTrace* trace,
                      long iteration_budget = -1);

struct SolveResult {
  Eigen::VectorXd x;           // in R^n
  double objective = 0.0;      // F(x)
  double gradient_norm = 0.0;
  double certified_gap = 0.0;
  long preliminary_iterations = 0;
  long main_iterations = 0;
  double eta0 = 0.0;
  double eta_final = 0.0;
  SolveMode mode = SolveMode::WellConditioned;
  IterationTrace trace;
  std::vector<std::string> warnings;

  long total_iterations() const { return preliminary_iterations + main_iterations; }
};

/// Solver for arbitrary shifts in the exponent polytope. Requires a positive
/// lower bound phi_0 on the facet gap; builds the ball domain with
/// R = (n/phi_0) log(2 beta/(delta/2)) and targets delta/2 in the lifted
/// program, so the returned point is a delta-approximate minimizer.
SolveResult solve_gp_general(const GpInstance& inst, const SolveParams& params);

/// Solver for well-conditioned instances (shift in the relative interior).
/// No radius bound and no condition-measure input is required; divergence is
/// reported as an ill-conditioned-instance error.
SolveResult solve_gp_wc(const GpInstance& inst, const SolveParams& params);

/// Gradient-norm solver: runs the selected GP solver at delta =
/// epsilon^2 / (2 R_theta^2) and verifies ||grad F(x)|| <= epsilon post hoc.
/// Returns x = 0 immediately when it already meets the target.
SolveResult solve_scaling(const GpInstance& inst, const SolveParams& params);

struct WeakMembershipResult {
  bool distance_within_epsilon = false;  // otherwise: ball not contained
  double gradient_norm = 0.0;
  long iterations = 0;
  std::string note;
};

/// Weak membership for conv(exponent rows): asserts either
/// d(theta, polytope) <= epsilon or that the epsilon-ball around theta is not
/// contained in it. Runs the general solver with unit coefficients under an
/// a-priori iteration budget; phi_0 is taken from the caller or derived from
/// exact rational exponents.
WeakMembershipResult weak_membership(const Eigen::MatrixXd& exponents, const Eigen::VectorXd& theta,
                                     double epsilon, std::optional<double> phi0 = std::nullopt,
                                     const std::optional<std::vector<RationalVector>>& rational_exponents =
                                         std::nullopt);

}  // namespace gpipm
