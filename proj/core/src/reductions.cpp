#include "gpipm/reductions.hpp"

#include <cmath>

#include "gpipm/errors.hpp"

namespace gpipm {

void ScalingProblem::validate() const {
  const Eigen::Index n = matrix.rows();
  if (n < 1 || matrix.cols() != n) throw InputError("scaling needs a square matrix");
  if ((matrix.array() < 0.0).any()) throw InputError("scaling matrix must be nonnegative");
  if (!(matrix.array() > 0.0).any()) throw InputError("scaling matrix must have a positive entry");
  if (row_targets.size() != n || col_targets.size() != n)
    throw InputError("target dimensions do not match the matrix");
  if ((row_targets.array() < 0.0).any() || (col_targets.array() < 0.0).any())
    throw InputError("targets must be nonnegative");
  if (std::abs(row_targets.sum() - 1.0) > 1e-12 || std::abs(col_targets.sum() - 1.0) > 1e-12)
    throw InputError("targets must sum to 1 (within 1e-12)");
}

void GraphGp::validate() const {
  if (vertex_count < 1) throw InputError("graph needs at least one vertex");
  if (edges.empty()) throw InputError("graph needs at least one edge");
  if (shift.size() != vertex_count) throw InputError("shift dimension must equal the vertex count");
  for (const auto& [u, v, w] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw InputError("edge endpoint out of range");
    if (!(w > 0.0)) throw InputError("edge weights must be positive");
  }
}

GpInstance matrix_scaling_instance(const ScalingProblem& sp, ScalingConvention convention) {
  sp.validate();
  const Eigen::Index n = sp.matrix.rows();
  const Eigen::Index nonzeros = (sp.matrix.array() > 0.0).count();

  Eigen::MatrixXd exponents = Eigen::MatrixXd::Zero(nonzeros, 2 * n);
  Eigen::VectorXd coefficients(nonzeros);
  Eigen::Index row = 0;
  const double col_sign = convention == ScalingConvention::Additive ? 1.0 : -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sp.matrix(i, j) <= 0.0) continue;  // zero entries contribute no term
      exponents(row, i) = 1.0;
      exponents(row, n + j) = col_sign;
      coefficients(row) = sp.matrix(i, j);
      ++row;
    }
  }
  Eigen::VectorXd shift(2 * n);
  shift.head(n) = sp.row_targets;
  shift.tail(n) = col_sign * sp.col_targets;
  return GpInstance(std::move(exponents), std::move(coefficients), std::move(shift));
}

GpInstance matrix_balancing_instance(const Eigen::MatrixXd& matrix) {
  const Eigen::Index n = matrix.rows();
  if (n < 1 || matrix.cols() != n) throw InputError("balancing needs a square matrix");
  if ((matrix.array() < 0.0).any()) throw InputError("balancing matrix must be nonnegative");

  Eigen::Index nonzeros = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && matrix(i, j) > 0.0) ++nonzeros;
  if (nonzeros == 0) throw InputError("balancing needs a positive off-diagonal entry");

  Eigen::MatrixXd exponents = Eigen::MatrixXd::Zero(nonzeros, n);
  Eigen::VectorXd coefficients(nonzeros);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || matrix(i, j) <= 0.0) continue;
      exponents(row, i) = 1.0;
      exponents(row, j) = -1.0;
      coefficients(row) = matrix(i, j);
      ++row;
    }
  }
  return GpInstance(std::move(exponents), std::move(coefficients), Eigen::VectorXd::Zero(n));
}

GpInstance graph_instance(const GraphGp& graph) {
  graph.validate();
  const Eigen::Index k = static_cast<Eigen::Index>(graph.edges.size());
  Eigen::MatrixXd exponents = Eigen::MatrixXd::Zero(k, graph.vertex_count);
  Eigen::VectorXd coefficients(k);
  for (Eigen::Index e = 0; e < k; ++e) {
    const auto& [u, v, w] = graph.edges[static_cast<std::size_t>(e)];
    // A self-loop yields the zero exponent; legal, just a constant term.
    exponents(e, u) += 1.0;
    exponents(e, v) -= 1.0;
    coefficients(e) = w;
  }
  return GpInstance(std::move(exponents), std::move(coefficients), graph.shift);
}

ScalingFactors extract_scaling(const ScalingProblem& sp, const Eigen::VectorXd& x,
                               ScalingConvention convention) {
  sp.validate();
  const Eigen::Index n = sp.matrix.rows();
  if (x.size() != 2 * n) throw InputError("scaling output must have dimension 2n");

  ScalingFactors factors;
  factors.left = x.head(n).array().exp();
  const double col_sign = convention == ScalingConvention::Additive ? 1.0 : -1.0;
  factors.right = (col_sign * x.tail(n).array()).exp();
  factors.rescaled = factors.left.asDiagonal() * sp.matrix * factors.right.asDiagonal();

  const double total = factors.rescaled.sum();
  Eigen::VectorXd residual(2 * n);
  residual.head(n) = factors.rescaled.rowwise().sum() / total - sp.row_targets;
  residual.tail(n) = factors.rescaled.colwise().sum().transpose() / total - sp.col_targets;
  factors.residual_norm = residual.norm();
  return factors;
}

Eigen::VectorXd dual_distribution(const GpInstance& inst, const Eigen::VectorXd& x) {
  return inst.term_weights(x);
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw InputError("KL divergence needs equal dimensions");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < 0 || q(i) <= 0) throw InputError("KL divergence needs p >= 0 and q > 0");
    if (p(i) > 0) sum += p(i) * std::log(p(i) / q(i));
  }
  return sum;
}

}  // namespace gpipm
