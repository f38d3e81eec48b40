// Command-line front end: solve, scale, condition and membership subcommands
// over the JSON instance format. Exit codes: 0 success, 1 input errors,
// 2 promise-violation or numerical diagnostics.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpipm/condition.hpp"
#include "gpipm/errors.hpp"
#include "gpipm/instance.hpp"
#include "gpipm/io.hpp"
#include "gpipm/ipm.hpp"
#include "gpipm/reductions.hpp"

namespace {

Eigen::VectorXd vector_from_json_text(const std::string& text, const char* what) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw gpipm::InputError(std::string(what) + " must be a JSON array, e.g. \"[0.5, 0.5]\"");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

struct SolveOptions {
  std::string instance_path;
  double delta = 1e-3;
  std::optional<double> phi0;
  bool well_conditioned = false;
  std::string trace_path;
};

int run_solve(const SolveOptions& opt) {
  if (opt.phi0.has_value() == opt.well_conditioned)
    throw gpipm::InputError("pass exactly one of --phi0 and --well-conditioned");
  const gpipm::GpInstance inst = gpipm::load_instance(opt.instance_path);
  gpipm::SolveParams params;
  params.delta = opt.delta;
  params.facet_gap_lower = opt.phi0;
  params.mode = opt.well_conditioned ? gpipm::SolveMode::WellConditioned : gpipm::SolveMode::General;
  const gpipm::SolveResult result = opt.well_conditioned ? gpipm::solve_gp_wc(inst, params)
                                                         : gpipm::solve_gp_general(inst, params);
  if (!opt.trace_path.empty()) gpipm::write_trace_csv(result.trace, opt.trace_path);
  std::cout << gpipm::solve_result_to_json(result) << "\n";
  return 0;
}

struct ScaleOptions {
  std::string input_path;
  double epsilon = 1e-6;
  std::string mode = "matrix-scaling";
  std::optional<double> phi0;
  bool well_conditioned = false;
  std::string row_targets;
  std::string col_targets;
  bool flow_convention = false;
  std::string trace_path;
};

int run_scale(const ScaleOptions& opt) {
  gpipm::SolveParams params;
  params.epsilon = opt.epsilon;
  params.facet_gap_lower = opt.phi0;
  // The well-conditioned solver is the default; --phi0 selects the general one.
  params.mode = opt.phi0 && !opt.well_conditioned ? gpipm::SolveMode::General
                                                  : gpipm::SolveMode::WellConditioned;

  if (opt.mode == "gp") {
    const gpipm::GpInstance inst = gpipm::load_instance(opt.input_path);
    const gpipm::SolveResult result = gpipm::solve_scaling(inst, params);
    if (!opt.trace_path.empty()) gpipm::write_trace_csv(result.trace, opt.trace_path);
    std::cout << gpipm::solve_result_to_json(result) << "\n";
    return 0;
  }

  if (opt.mode == "matrix-scaling") {
    gpipm::ScalingProblem sp = gpipm::load_scaling_problem(opt.input_path);
    if (!opt.row_targets.empty()) sp.row_targets = vector_from_json_text(opt.row_targets, "--row-targets");
    if (!opt.col_targets.empty()) sp.col_targets = vector_from_json_text(opt.col_targets, "--col-targets");
    sp.validate();
    const auto convention =
        opt.flow_convention ? gpipm::ScalingConvention::Flow : gpipm::ScalingConvention::Additive;
    const gpipm::GpInstance inst = gpipm::matrix_scaling_instance(sp, convention);
    const gpipm::SolveResult result = gpipm::solve_scaling(inst, params);
    if (!opt.trace_path.empty()) gpipm::write_trace_csv(result.trace, opt.trace_path);
    const auto factors = gpipm::extract_scaling(sp, result.x, convention);
    std::cout << gpipm::scaling_result_to_json(result, factors) << "\n";
    return 0;
  }

  if (opt.mode == "matrix-balancing") {
    const Eigen::MatrixXd m = gpipm::load_matrix(opt.input_path);
    const gpipm::GpInstance inst = gpipm::matrix_balancing_instance(m);
    const gpipm::SolveResult result = gpipm::solve_scaling(inst, params);
    if (!opt.trace_path.empty()) gpipm::write_trace_csv(result.trace, opt.trace_path);

    const Eigen::VectorXd left = result.x.array().exp();
    const Eigen::MatrixXd balanced =
        left.asDiagonal() * m * left.array().inverse().matrix().asDiagonal();
    nlohmann::json j = nlohmann::json::parse(gpipm::solve_result_to_json(result));
    j["L"] = std::vector<double>(left.data(), left.data() + left.size());
    const Eigen::VectorXd right = left.array().inverse();
    j["R"] = std::vector<double>(right.data(), right.data() + right.size());
    const double total = balanced.sum();
    const Eigen::VectorXd rs = balanced.rowwise().sum() / total;
    const Eigen::VectorXd cs = balanced.colwise().sum().transpose() / total;
    j["row_sums"] = std::vector<double>(rs.data(), rs.data() + rs.size());
    j["col_sums"] = std::vector<double>(cs.data(), cs.data() + cs.size());
    j["residual_norm"] = (rs - cs).norm();
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  throw gpipm::InputError("--mode must be matrix-scaling, matrix-balancing or gp");
}

struct ConditionOptions {
  std::string instance_path;
  bool with_facets = false;
};

int run_condition(const ConditionOptions& opt) {
  const gpipm::GpInstance inst = gpipm::load_instance(opt.instance_path);
  const gpipm::ConditionReport report = gpipm::analyze_instance(inst);
  const auto poly = gpipm::polytope_basis(inst.exponents());
  if (opt.with_facets && !report.facets_skipped && poly.dim() >= 1) {
    const auto facets = gpipm::enumerate_facets(inst.exponents(), poly);
    std::cout << gpipm::condition_report_to_json(report, &facets) << "\n";
  } else {
    std::cout << gpipm::condition_report_to_json(report) << "\n";
  }
  return 0;
}

struct MembershipOptions {
  std::string instance_path;
  std::string theta_text;
  double epsilon = 0.1;
  std::optional<double> phi0;
};

int run_membership(const MembershipOptions& opt) {
  const gpipm::GpInstance inst = gpipm::load_instance(opt.instance_path);
  const Eigen::VectorXd theta = opt.theta_text.empty()
                                    ? inst.shift()
                                    : vector_from_json_text(opt.theta_text, "--theta");
  std::optional<std::vector<gpipm::RationalVector>> rational;
  if (inst.rational_form()) rational = inst.rational_form()->exponents;
  const auto result = gpipm::weak_membership(inst.exponents(), theta, opt.epsilon, opt.phi0, rational);
  std::cout << gpipm::weak_membership_to_json(result, opt.epsilon) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior-point solver for unconstrained geometric programs and scaling problems"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Minimize F(x) for an instance file");
  solve->add_option("instance", solve_opt.instance_path, "instance JSON file")->required();
  solve->add_option("--delta", solve_opt.delta, "target precision in (0,1)");
  double solve_phi0 = 0.0;
  auto* solve_phi0_opt = solve->add_option("--phi0", solve_phi0, "facet-gap lower bound (general mode)");
  solve->add_flag("--well-conditioned", solve_opt.well_conditioned,
                  "use the well-conditioned solver (shift in the relative interior)");
  solve->add_option("--trace", solve_opt.trace_path, "write the iteration trace CSV here");

  ScaleOptions scale_opt;
  auto* scale = app.add_subcommand("scale", "Drive the gradient norm below epsilon");
  scale->add_option("input", scale_opt.input_path, "instance or matrix file")->required();
  scale->add_option("--epsilon", scale_opt.epsilon, "target gradient norm")->required();
  scale->add_option("--mode", scale_opt.mode, "matrix-scaling | matrix-balancing | gp");
  double scale_phi0 = 0.0;
  auto* scale_phi0_opt = scale->add_option("--phi0", scale_phi0, "facet-gap lower bound (general mode)");
  scale->add_flag("--well-conditioned", scale_opt.well_conditioned, "force the well-conditioned solver");
  scale->add_option("--row-targets", scale_opt.row_targets, "row targets as a JSON array");
  scale->add_option("--col-targets", scale_opt.col_targets, "column targets as a JSON array");
  scale->add_flag("--flow-convention", scale_opt.flow_convention,
                  "use exponents x_i - y_j instead of x_i + y_j");
  scale->add_option("--trace", scale_opt.trace_path, "write the iteration trace CSV here");

  ConditionOptions cond_opt;
  auto* condition = app.add_subcommand("condition", "Report the condition measures of an instance");
  condition->add_option("instance", cond_opt.instance_path, "instance JSON file")->required();
  condition->add_flag("--facets", cond_opt.with_facets, "include the facet list");

  MembershipOptions member_opt;
  auto* membership = app.add_subcommand("membership", "Weak membership in the Newton polytope");
  membership->add_option("instance", member_opt.instance_path, "instance JSON file")->required();
  membership->add_option("--theta", member_opt.theta_text, "query point as a JSON array");
  membership->add_option("--epsilon", member_opt.epsilon, "membership precision")->required();
  double member_phi0 = 0.0;
  auto* member_phi0_opt = membership->add_option("--phi0", member_phi0, "facet-gap lower bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (solve_phi0_opt->count() > 0) solve_opt.phi0 = solve_phi0;
  if (scale_phi0_opt->count() > 0) scale_opt.phi0 = scale_phi0;
  if (member_phi0_opt->count() > 0) member_opt.phi0 = member_phi0;

  try {
    if (solve->parsed()) return run_solve(solve_opt);
    if (scale->parsed()) return run_scale(scale_opt);
    if (condition->parsed()) return run_condition(cond_opt);
    if (membership->parsed()) return run_membership(member_opt);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const gpipm::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const gpipm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
