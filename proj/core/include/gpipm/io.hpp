#pragma once

#include <iosfwd>
#include <string>

#include "gpipm/condition.hpp"
#include "gpipm/instance.hpp"
#include "gpipm/ipm.hpp"
#include "gpipm/reductions.hpp"

namespace gpipm {

/// Instance document: {"exponents": [[..]..], "coefficients": [..],
/// "shift": [..], "metadata": {...}}. Entries of exponents/shift may be
/// numbers or exact-rational strings "p/q"; when every entry is an integer or
/// a rational string, the exact form is kept for the encoding-length bounds.
GpInstance parse_instance_json(const std::string& text);
GpInstance load_instance(const std::string& path);

/// Serializes with 17 significant digits so doubles round-trip exactly.
/// Exact rational entries are written back as "p/q" strings.
std::string instance_to_json(const GpInstance& inst);

/// Matrix input: a JSON file holding either a dense 2d array or an object
/// {"matrix": [[..]..], "row_targets": [..], "col_targets": [..]}, or a
/// plain-text sparse triplet file with one "row col value" line per nonzero
/// (0-indexed). Missing targets default to uniform.
ScalingProblem load_scaling_problem(const std::string& path);
Eigen::MatrixXd load_matrix(const std::string& path);

std::string condition_report_to_json(const ConditionReport& report,
                                     const std::vector<Facet>* facets = nullptr);

std::string solve_result_to_json(const SolveResult& result);

std::string scaling_result_to_json(const SolveResult& result, const ScalingFactors& factors);

std::string weak_membership_to_json(const WeakMembershipResult& result, double epsilon);

/// CSV with columns: stage,iter,parameter,decrement,t,min_slack,ridge_used.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);
void write_trace_csv(const IterationTrace& trace, const std::string& path);

}  // namespace gpipm
