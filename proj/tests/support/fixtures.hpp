#pragma once

// Shared deterministic fixtures and seeded generators for the unit tests and
// the acceptance suite.

#include <random>

#include <Eigen/Dense>

#include "gpipm/instance.hpp"
#include "gpipm/rational.hpp"
#include "gpipm/reductions.hpp"

namespace gpipm::testing {

inline RationalVector rationals(std::initializer_list<const char*> vals) {
  RationalVector out;
  for (const char* v : vals) out.push_back(parse_rational(v));
  return out;
}

/// Exponents {0, 1/2, 1}, unit coefficients, shift 1/2; exact form attached.
inline GpInstance interval_instance() {
  Eigen::MatrixXd exps(3, 1);
  exps << 0.0, 0.5, 1.0;
  RationalForm form;
  form.exponents = {rationals({"0"}), rationals({"1/2"}), rationals({"1"})};
  form.shift = rationals({"1/2"});
  return GpInstance(exps, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Constant(1, 0.5),
                    std::move(form));
}

/// Exponents {0, 1}, unit coefficients, shift at the given point.
inline GpInstance zero_one_instance(double theta) {
  Eigen::MatrixXd exps(2, 1);
  exps << 0.0, 1.0;
  return GpInstance(exps, Eigen::VectorXd::Ones(2), Eigen::VectorXd::Constant(1, theta));
}

/// The tight facet-gap example: exponents {0, phi, 1}, unit coefficients,
/// shift 0. The facet gap equals phi and the optimal value is 0.
inline GpInstance facet_gap_instance(double phi = 0.25) {
  Eigen::MatrixXd exps(3, 1);
  exps << 0.0, phi, 1.0;
  return GpInstance(exps, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(1));
}

/// Unit square vertices in R^2 with unit coefficients.
inline GpInstance unit_square_instance(const Eigen::Vector2d& theta) {
  Eigen::MatrixXd exps(4, 2);
  exps << 0, 0, 1, 0, 0, 1, 1, 1;
  return GpInstance(exps, Eigen::VectorXd::Ones(4), theta);
}

/// Standard-basis simplex e_1, e_2, e_3 with the barycenter shift.
inline GpInstance simplex_instance() {
  Eigen::MatrixXd exps = Eigen::MatrixXd::Identity(3, 3);
  RationalForm form;
  form.exponents = {rationals({"1", "0", "0"}), rationals({"0", "1", "0"}),
                    rationals({"0", "0", "1"})};
  form.shift = rationals({"1/3", "1/3", "1/3"});
  return GpInstance(exps, Eigen::VectorXd::Ones(3),
                    Eigen::VectorXd::Constant(3, 1.0 / 3.0), std::move(form));
}

/// Random well-conditioned instance: n in [2,5], k in [n+2,12], exponents
/// uniform in [-1,1], coefficients in [1/2,2], shift at the barycenter.
inline GpInstance random_wc_instance(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> n_dist(2, 5);
  const int n = n_dist(rng);
  std::uniform_int_distribution<int> k_dist(n + 2, 12);
  const int k = k_dist(rng);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> coeff(0.5, 2.0);

  Eigen::MatrixXd exps(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) exps(i, j) = entry(rng);
  Eigen::VectorXd q(k);
  for (int i = 0; i < k; ++i) q(i) = coeff(rng);
  const Eigen::VectorXd theta = exps.colwise().mean();
  return GpInstance(std::move(exps), std::move(q), theta);
}

/// Random integral instance with entries in [-3,3], n <= 4, k <= 8, exact
/// rational form, and the (rational) barycenter as shift.
inline GpInstance random_integral_instance(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> n_dist(2, 4);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (unsigned attempt = 0;; ++attempt) {
    const int n = n_dist(rng);
    std::uniform_int_distribution<int> k_dist(n + 1, 8);
    const int k = k_dist(rng);

    Eigen::MatrixXd exps(k, n);
    RationalForm form;
    form.exponents.resize(static_cast<std::size_t>(k));
    std::vector<BigInt> sums(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) {
        const int v = entry(rng);
        exps(i, j) = v;
        form.exponents[static_cast<std::size_t>(i)].emplace_back(v);
        sums[static_cast<std::size_t>(j)] += v;
      }
    }
    Eigen::VectorXd theta(n);
    for (int j = 0; j < n; ++j) {
      form.shift.emplace_back(Rational(sums[static_cast<std::size_t>(j)], BigInt(k)));
      theta(j) = to_double(form.shift[static_cast<std::size_t>(j)]);
    }
    // Exact barycenters of k integers may not be exactly representable; the
    // rational form requires agreement to one ulp, so regenerate when not.
    bool exact = true;
    for (int j = 0; j < n; ++j)
      exact = exact && to_double(form.shift[static_cast<std::size_t>(j)]) == theta(j);

    GpInstance inst(exps, Eigen::VectorXd::Ones(k), theta, exact ? std::make_optional(form) : std::nullopt);
    const auto basis = subspace_basis(inst);
    if (basis.dim() >= 1 && basis.dim() <= 4 && inst.rational_form()) return inst;
    if (attempt > 200) throw std::runtime_error("could not build an integral fixture");
  }
}

/// Weakly connected random digraph on n vertices containing at least one
/// 2-cycle (so the zero shift lies in the exponent polytope). Exponents are
/// the incidence columns e_u - e_v; unit weights; zero shift.
inline GpInstance random_digraph_instance(unsigned seed, int n) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<std::pair<int, int>> arcs;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    const int u = parent(rng);
    if (coin(rng))
      arcs.emplace_back(u, v);
    else
      arcs.emplace_back(v, u);
  }
  arcs.emplace_back(arcs.front().second, arcs.front().first);  // close a 2-cycle
  std::uniform_int_distribution<int> extra_dist(0, n);
  const int extra = extra_dist(rng);
  std::uniform_int_distribution<int> vert(0, n - 1);
  for (int e = 0; e < extra && static_cast<int>(arcs.size()) < 12; ++e) {
    const int u = vert(rng), v = vert(rng);
    if (u == v) continue;
    if (std::find(arcs.begin(), arcs.end(), std::make_pair(u, v)) != arcs.end()) continue;
    arcs.emplace_back(u, v);
  }

  const auto k = static_cast<Eigen::Index>(arcs.size());
  Eigen::MatrixXd exps = Eigen::MatrixXd::Zero(k, n);
  for (Eigen::Index i = 0; i < k; ++i) {
    exps(i, arcs[static_cast<std::size_t>(i)].first) = 1.0;
    exps(i, arcs[static_cast<std::size_t>(i)].second) = -1.0;
  }
  RationalForm form;
  form.exponents.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j)
      form.exponents[static_cast<std::size_t>(i)].emplace_back(static_cast<long>(exps(i, j)));
  for (int j = 0; j < n; ++j) form.shift.emplace_back(0);
  return GpInstance(std::move(exps), Eigen::VectorXd::Ones(k), Eigen::VectorXd::Zero(n),
                    std::move(form));
}

/// Random positive matrix with entries in [1/2, 2] and uniform targets.
inline ScalingProblem random_scaling_problem(unsigned seed, int n) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> entry(0.5, 2.0);
  ScalingProblem sp;
  sp.matrix.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sp.matrix(i, j) = entry(rng);
  sp.row_targets = Eigen::VectorXd::Constant(n, 1.0 / n);
  sp.col_targets = Eigen::VectorXd::Constant(n, 1.0 / n);
  return sp;
}

/// All-ones 2x2 scaling problem with uniform targets.
inline ScalingProblem ones_scaling_problem() {
  ScalingProblem sp;
  sp.matrix = Eigen::MatrixXd::Ones(2, 2);
  sp.row_targets = Eigen::VectorXd::Constant(2, 0.5);
  sp.col_targets = Eigen::VectorXd::Constant(2, 0.5);
  return sp;
}

}  // namespace gpipm::testing
