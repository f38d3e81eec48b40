#include "gpipm/ipm.hpp"

#include <cmath>
#include <sstream>

#include "gpipm/errors.hpp"

namespace gpipm {

namespace {

constexpr double kCenteringThreshold = 1.0 / 6.0;
constexpr double kStartDecrement = 1.0 / 9.0;
constexpr double kBreakdownDecrement = 0.25;
constexpr double kPrelimSlackAbort = 1e-250;
constexpr double kMaxBallRadius = 1e12;

double certified_gap(int nu, double eta) { return 1.2 * static_cast<double>(nu) / eta; }

// 4x the preliminary-stage budget 8 sqrt(nu) log(36 nu / sym), with the
// symmetry of the default start bounded through the enclosing radius. In
// well-conditioned mode the bound needs the boundary distance; it is computed
// exactly at desk scale and otherwise replaced by a small floor that keeps
// the cap finite.
long default_preliminary_cap(const DomainSpec& spec) {
  const auto& inst = spec.instance();
  const double k = static_cast<double>(inst.term_count());
  const double beta = inst.coefficient_ratio();
  const double r_big = inst.enclosing_radius();
  const int nu = spec.complexity_parameter();

  double ball = 0.0;
  if (spec.radius()) {
    ball = *spec.radius();
  } else {
    double r_small = -1.0;
    try {
      const auto report = analyze_instance(inst);
      if (report.r_theta && *report.r_theta > 0) r_small = *report.r_theta;
    } catch (const Error&) {
      // fall through to the floor
    }
    if (!(r_small > 0)) r_small = 1e-12 * std::max(r_big, 1.0);
    ball = std::log(5.0 * k * beta) / r_small;
  }
  const double sym_inv = 10.0 * std::max({r_big * ball, k, std::log(4.0 * k * beta)});
  const double budget = 8.0 * std::sqrt(static_cast<double>(nu)) *
                        std::log(36.0 * static_cast<double>(nu) * sym_inv);
  return static_cast<long>(std::ceil(4.0 * std::max(budget, 16.0)));
}

TraceRow make_row(const DomainSpec& spec, Stage stage, long iter, double parameter,
                  double decrement, const InteriorPoint& p, bool ridge) {
  TraceRow row;
  row.stage = stage;
  row.iter = iter;
  row.parameter = parameter;
  row.decrement = decrement;
  row.objective_t = p.t;
  row.min_slack = spec.feasibility(p).min_slack;
  row.ridge_used = ridge;
  return row;
}

}  // namespace

void SolveParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (epsilon && !(*epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (facet_gap_lower && !(*facet_gap_lower > 0.0))
    throw InputError("the facet-gap lower bound must be positive");
  if (max_iterations && *max_iterations < 0) throw InputError("max_iterations must be nonnegative");
  if (main_iterations && *main_iterations < 0) throw InputError("main_iterations must be nonnegative");
}

PreliminaryResult preliminary_stage(const DomainSpec& spec, const InteriorPoint& start,
                                    const SolveParams& params, IterationTrace* trace) {
  const auto start_report = spec.feasibility(start);
  if (!start_report.feasible()) throw FeasibilityError("preliminary stage needs a strictly feasible start");

  const int nu = spec.complexity_parameter();
  const double shrink = 1.0 - 1.0 / (8.0 * std::sqrt(static_cast<double>(nu)));
  const long cap = params.max_iterations ? *params.max_iterations : default_preliminary_cap(spec);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(spec.dim());
  const Eigen::VectorXd g0 = spec.barrier_gradient(start);

  InteriorPoint p = start;
  double mu = 1.0;
  long iters = 0;
  while (spec.newton_decrement_for(p, zero) > kCenteringThreshold) {
    if (iters >= cap) {
      throw DivergenceError("preliminary stage exceeded its iteration budget of " +
                            std::to_string(cap) + "; the instance promise looks violated");
    }
    mu *= shrink;
    bool ridge = false;
    p = spec.newton_step_for(p, -mu * g0, &ridge);
    ++iters;
    const auto report = spec.feasibility(p);
    if (report.min_slack < kPrelimSlackAbort)
      throw DivergenceError("preliminary stage slacks collapsed below 1e-250");
    if (trace) {
      const double dec = spec.newton_decrement_for(p, -mu * g0);
      TraceRow row = make_row(spec, Stage::Preliminary, iters, mu, dec, p, ridge);
      row.min_slack = report.min_slack;
      trace->add(row);
    }
  }

  // Pick the starting parameter from the local norm of the objective and take
  // the corresponding Newton step; the result is 1/9-centered for eta_0.
  const Eigen::VectorXd c = spec.objective_direction();
  const Eigen::MatrixXd h = spec.barrier_hessian(p);
  const Eigen::LLT<Eigen::MatrixXd> llt(h);
  double cnorm;
  if (llt.info() == Eigen::Success) {
    cnorm = std::sqrt(std::max(0.0, c.dot(llt.solve(c))));
  } else {
    throw NumericalError("failed to factor the Hessian while picking eta_0");
  }
  const double eta0 = 1.0 / (12.0 * cnorm);

  bool ridge = false;
  InteriorPoint p0 = spec.newton_step(p, eta0, &ridge);
  ++iters;
  if (trace) {
    const double dec = spec.newton_decrement(p0, eta0);
    trace->add(make_row(spec, Stage::Preliminary, iters, eta0, dec, p0, ridge));
  }
  return PreliminaryResult{std::move(p0), eta0, iters};
}

MainResult main_stage(const DomainSpec& spec, const InteriorPoint& p0, double eta0, double delta,
                      const SolveParams& params, IterationTrace* trace, long iteration_budget) {
  if (!(eta0 > 0)) throw InputError("main stage needs a positive starting parameter");
  const double start_dec = spec.newton_decrement(p0, eta0);
  if (start_dec > kStartDecrement + 1e-6)
    throw InputError("main stage requires a 1/9-centered start (decrement " +
                     std::to_string(start_dec) + ")");

  const int nu = spec.complexity_parameter();
  const double grow = 1.0 + 1.0 / (8.0 * std::sqrt(static_cast<double>(nu)));

  long t_formula = 0;
  if (certified_gap(nu, eta0) > delta) {
    t_formula = static_cast<long>(
        std::ceil(10.0 * std::sqrt(static_cast<double>(nu)) * std::log(certified_gap(nu, eta0) / delta)));
  }
  long cap = params.main_iterations ? *params.main_iterations : 10 * std::max(t_formula, 1L);
  if (iteration_budget >= 0) cap = std::min(cap, iteration_budget);

  InteriorPoint p = p0;
  double eta = eta0;
  long iters = 0;
  const bool fixed_count = params.main_iterations.has_value();
  while (fixed_count ? iters < *params.main_iterations : certified_gap(nu, eta) > delta) {
    if (!fixed_count && iters >= cap) {
      throw DivergenceError("main stage exceeded its iteration budget of " + std::to_string(cap));
    }
    eta *= grow;
    bool ridge = false;
    p = spec.newton_step(p, eta, &ridge);
    ++iters;
    const double dec = spec.newton_decrement(p, eta);
    if (trace) trace->add(make_row(spec, Stage::Main, iters, eta, dec, p, ridge));
    if (dec > kBreakdownDecrement) {
      throw NumericalError("Newton decrement " + std::to_string(dec) +
                           " exceeded 1/4: numerical breakdown");
    }
  }
  return MainResult{std::move(p), eta, iters, certified_gap(nu, eta)};
}

namespace {

SolveResult run_ipm(const DomainSpec& spec, double delta_ipm, const SolveParams& params) {
  SolveResult result;
  IterationTrace* trace = params.trace_enabled ? &result.trace : nullptr;

  const auto pre = preliminary_stage(spec, spec.default_start(), params, trace);
  long remaining = -1;
  if (params.max_iterations) remaining = std::max<long>(0, *params.max_iterations - pre.iterations);

  const auto main = main_stage(spec, pre.p0, pre.eta0, delta_ipm, params, trace, remaining);

  const auto& inst = spec.instance();
  result.x = spec.lift_x(main.p);
  result.objective = inst.value(result.x);
  result.gradient_norm = inst.gradient(result.x).norm();
  result.certified_gap = main.certified_gap;
  result.preliminary_iterations = pre.iterations;
  result.main_iterations = main.iterations;
  result.eta0 = pre.eta0;
  result.eta_final = main.eta;
  return result;
}

}  // namespace

SolveResult solve_gp_wc(const GpInstance& inst, const SolveParams& params) {
  params.validate();
  const DomainSpec spec = DomainSpec::well_conditioned(inst);
  try {
    SolveResult result = run_ipm(spec, params.delta, params);
    result.mode = SolveMode::WellConditioned;
    return result;
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("ill-conditioned instance: the well-conditioned solver requires "
                                      "the shift in the relative interior of the Newton polytope (") +
                          e.what() + ")");
  }
}

SolveResult solve_gp_general(const GpInstance& inst, const SolveParams& params) {
  params.validate();
  if (!params.facet_gap_lower)
    throw InputError("the general solver needs a facet-gap lower bound (phi0)");
  const double phi0 = *params.facet_gap_lower;
  const double delta = params.delta;
  const double beta = inst.coefficient_ratio();

  std::vector<std::string> warnings;
  if (params.check_membership && inst.term_count() <= kMaxFacetTerms) {
    try {
      const auto report = analyze_instance(inst);
      if (report.membership && report.membership->region == Region::Outside) {
        throw InputError("shift lies outside the Newton polytope (margin " +
                         std::to_string(report.membership->margin) + ")");
      }
      if (report.facet_gap && phi0 > *report.facet_gap + 1e-12) {
        std::ostringstream w;
        w << "facet-gap lower bound " << phi0 << " exceeds the computed facet gap "
          << *report.facet_gap << "; guarantees may not hold";
        warnings.push_back(w.str());
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error&) {
      // Membership is best effort; proceed on the caller's promise.
    }
  }

  const double radius = (static_cast<double>(inst.dim()) / phi0) * std::log(2.0 * beta / (delta / 2.0));
  if (!(radius <= kMaxBallRadius))
    throw InputError("ball radius from the facet-gap bound is too large to be meaningful; "
                     "supply a larger phi0");

  const DomainSpec spec = DomainSpec::with_radius(inst, radius);
  try {
    SolveResult result = run_ipm(spec, delta / 2.0, params);
    result.mode = SolveMode::General;
    // The radius absorbs delta/2, the lifted program the other half.
    result.certified_gap += delta / 2.0;
    result.warnings = std::move(warnings);
    return result;
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("solver diverged; the shift likely lies outside the Newton "
                                      "polytope (") +
                          e.what() + ")");
  }
}

SolveResult solve_scaling(const GpInstance& inst, const SolveParams& params) {
  params.validate();
  if (!params.epsilon) throw InputError("scaling mode needs a target epsilon");
  const double eps = *params.epsilon;

  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(inst.dim());
  const double g0 = inst.gradient(origin).norm();
  if (g0 <= eps) {
    SolveResult result;
    result.x = origin;
    result.objective = inst.value(origin);
    result.gradient_norm = g0;
    result.certified_gap = 0.0;
    result.mode = params.mode;
    return result;
  }

  const double r_big = inst.enclosing_radius();
  SolveParams sub = params;
  sub.delta = std::min(eps * eps / (2.0 * r_big * r_big), 0.5);
  SolveResult result =
      params.mode == SolveMode::General ? solve_gp_general(inst, sub) : solve_gp_wc(inst, sub);
  if (result.gradient_norm > eps) {
    throw NumericalError("post-hoc gradient check failed: measured norm " +
                         std::to_string(result.gradient_norm) + " exceeds epsilon " +
                         std::to_string(eps));
  }
  return result;
}

WeakMembershipResult weak_membership(const Eigen::MatrixXd& exponents, const Eigen::VectorXd& theta,
                                     double epsilon, std::optional<double> phi0,
                                     const std::optional<std::vector<RationalVector>>& rational_exponents) {
  if (!(epsilon > 0)) throw InputError("weak membership needs a positive epsilon");
  const Eigen::Index k = exponents.rows();
  const GpInstance inst(exponents, Eigen::VectorXd::Ones(k), theta);

  WeakMembershipResult result;
  const double g0 = inst.gradient(Eigen::VectorXd::Zero(inst.dim())).norm();
  if (g0 <= epsilon) {
    result.distance_within_epsilon = true;
    result.gradient_norm = g0;
    result.note = "gradient at the origin already meets epsilon";
    return result;
  }

  double gap_bound = 0.0;
  if (phi0) {
    gap_bound = *phi0;
  } else if (rational_exponents) {
    RationalForm form;
    form.exponents = *rational_exponents;
    form.shift.reserve(static_cast<std::size_t>(theta.size()));
    for (Eigen::Index i = 0; i < theta.size(); ++i) form.shift.emplace_back(theta(i));
    const GpInstance exact(exponents, Eigen::VectorXd::Ones(k), theta, std::move(form));
    gap_bound = facet_gap_encoding_bound(exact).value();
    if (!(gap_bound > 0))
      throw InputError("the encoding facet-gap bound underflows; supply phi0 explicitly");
  } else {
    throw InputError("weak membership needs phi0 or exact rational exponents");
  }

  const double r_big = inst.enclosing_radius();
  const double delta = std::min(epsilon * epsilon / (2.0 * r_big * r_big), 0.5);
  const double beta = static_cast<double>(k);
  const double radius =
      (static_cast<double>(inst.dim()) / gap_bound) * std::log(2.0 * beta / (delta / 2.0));
  if (!(radius <= kMaxBallRadius))
    throw InputError("ball radius from the facet-gap bound is too large; supply a larger phi0");

  // A-priori iteration budget: 10x the total path-following bound, computed
  // from the symmetry of the default start and V - val <= log(5 k beta).
  const double nu = 2.0 * static_cast<double>(k) + 3.0;
  const double kk = static_cast<double>(k);
  const double sym_inv = 10.0 * std::max({r_big * radius, kk, std::log(4.0 * kk * beta)});
  const double budget =
      18.0 * std::sqrt(nu) * std::log(36.0 * nu * sym_inv * std::log(5.0 * kk * beta) / (delta / 2.0));
  SolveParams sub;
  sub.epsilon = epsilon;
  sub.delta = delta;
  sub.facet_gap_lower = gap_bound;
  sub.mode = SolveMode::General;
  sub.check_membership = false;
  sub.max_iterations = static_cast<long>(std::ceil(10.0 * std::max(budget, 64.0)));
  sub.trace_enabled = false;

  try {
    const SolveResult solved = solve_scaling(inst, sub);
    result.distance_within_epsilon = true;
    result.gradient_norm = solved.gradient_norm;
    result.iterations = solved.total_iterations();
    result.note = "gradient certificate: grad F(x) lies in the polytope";
  } catch (const DivergenceError& e) {
    result.distance_within_epsilon = false;
    result.note = e.what();
  } catch (const NumericalError& e) {
    result.distance_within_epsilon = false;
    result.note = e.what();
  } catch (const StepError& e) {
    result.distance_within_epsilon = false;
    result.note = e.what();
  }
  if (!result.distance_within_epsilon) result.gradient_norm = g0;
  return result;
}

}  // namespace gpipm
