#pragma once

#include <Eigen/Dense>

#include "gpipm/instance.hpp"

namespace gpipm {

/// Rescale the rows and columns of a nonnegative matrix so that its row and
/// column sums match the given targets (both normalized to sum 1).
struct ScalingProblem {
  Eigen::MatrixXd matrix;       // nonnegative, at least one positive entry
  Eigen::VectorXd row_targets;  // ||r||_1 = 1
  Eigen::VectorXd col_targets;  // ||c||_1 = 1

  void validate() const;
};

/// Directed-graph program: one term q_uv e^{x_u - x_v} per edge.
struct GraphGp {
  int vertex_count = 0;
  std::vector<std::tuple<int, int, double>> edges;  // (from, to, weight > 0)
  Eigen::VectorXd shift;                            // in R^vertex_count

  void validate() const;
};

/// Exponent sign convention for matrix scaling. Additive is e^{x_i + y_j}
/// with shift (r, c); Flow is e^{x_i - y_j} with shift (r, -c), matching the
/// bipartite-graph form. The two are related by y -> -y.
enum class ScalingConvention { Additive, Flow };

/// One term M_ij e^{x_i + y_j} per positive entry; zero entries contribute no
/// term, so the term count equals the number of nonzeros.
GpInstance matrix_scaling_instance(const ScalingProblem& sp,
                                   ScalingConvention convention = ScalingConvention::Additive);

/// Matrix balancing as the complete-digraph program: exponents e_i - e_j per
/// positive off-diagonal entry, coefficients M_ij, shift zero. The diagonal
/// is ignored.
GpInstance matrix_balancing_instance(const Eigen::MatrixXd& matrix);

GpInstance graph_instance(const GraphGp& graph);

struct ScalingFactors {
  Eigen::VectorXd left;        // diag(e^{x_i})
  Eigen::VectorXd right;       // diag(e^{y_j})
  Eigen::MatrixXd rescaled;    // L M R
  double residual_norm = 0.0;  // || (r(N), c(N)) / ||N||_1 - (r, c) ||_2
};

/// Interprets solver output x = (x block, y block) for a scaling instance.
ScalingFactors extract_scaling(const ScalingProblem& sp, const Eigen::VectorXd& x,
                               ScalingConvention convention = ScalingConvention::Additive);

/// The softmax distribution p_i = q_i e^{<w_i - shift, x> - F(x)} over terms.
/// Sums to one; its mean is shift + gradient(x); and
/// F(x) = -KL(p || q) + <gradient(x), x>.
Eigen::VectorXd dual_distribution(const GpInstance& inst, const Eigen::VectorXd& x);

/// sum_i p_i log(p_i / q_i); q need not be normalized.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace gpipm
