#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpipm/instance.hpp"

namespace gpipm {

/// Geometric tolerance used throughout the condition computations (absolute,
/// on normalized data). Pinned by tests; do not change casually.
inline constexpr double kGeomTol = 1e-9;

/// Facet enumeration is exact brute force; instances beyond these sizes are
/// rejected (or reported as skipped by analyze_instance).
inline constexpr Eigen::Index kMaxFacetTerms = 20;    // k
inline constexpr Eigen::Index kMaxFacetSubspace = 5;  // m

/// One facet of the exponent polytope inside its affine hull: outward unit
/// normal a (a vector of the subspace W), offset b, and the indices of all
/// exponent rows lying on the hyperplane <., a> = b.
struct Facet {
  Eigen::VectorXd normal;        // in R^n, unit, lies in W
  double offset = 0.0;           // max_i <w_i, normal>
  std::vector<int> support;      // indices on the facet, ascending
};

/// Orthonormal basis of the direction space of the affine hull of the
/// exponent rows. Coincides with subspace_basis whenever the shift lies in
/// the affine hull, but is defined without reference to a shift.
SubspaceBasis polytope_basis(const Eigen::MatrixXd& exponents);

/// Complete, duplicate-free facet list of the exponent polytope within its
/// affine hull. Brute force over affinely independent m-subsets; candidates
/// are deduplicated by support set and kept sorted for determinism.
/// The basis must span exactly the polytope's direction space (use
/// polytope_basis, or subspace_basis when the shift is in the affine hull).
/// Requires 1 <= m <= kMaxFacetSubspace and k <= kMaxFacetTerms.
std::vector<Facet> enumerate_facets(const Eigen::MatrixXd& exponents, const SubspaceBasis& basis);

/// Signed distance from theta to the boundary: min over facets of
/// (offset - <theta, normal>). Negative iff theta lies outside the polytope.
/// Requires theta in the affine hull of the exponents (residual <= kGeomTol).
double signed_boundary_distance(const std::vector<Facet>& facets, const Eigen::VectorXd& theta);

/// Distance from theta to the relative boundary of the exponent polytope.
/// Throws InputError when theta is outside the affine hull.
double distance_to_boundary(const Eigen::MatrixXd& exponents, const std::vector<Facet>& facets,
                            const Eigen::VectorXd& theta);

/// max_{i != j} ||w_i - w_j||_2; zero for a single exponent.
double exponent_diameter(const Eigen::MatrixXd& exponents);

/// Smallest distance from any exponent to the affine span of any facet not
/// containing it.
double facet_gap(const Eigen::MatrixXd& exponents, const std::vector<Facet>& facets);

enum class Region { Interior, Boundary, Outside };

struct MembershipResult {
  Region region = Region::Outside;
  double margin = 0.0;  // min facet slack; negative outside, ~0 on the boundary
};

/// Classifies theta against the polytope. A point outside the affine hull is
/// Outside with margin equal to minus the affine residual.
MembershipResult classify_membership(const Eigen::MatrixXd& exponents,
                                     const std::vector<Facet>& facets,
                                     const Eigen::VectorXd& theta);

/// Exhaustive total unimodularity check over all square submatrices of the
/// matrix with the exponents as columns, in exact integer arithmetic.
/// Returns nullopt ("undecided") when min(n, k) > 8 and force is false.
/// Throws InputError for non-integral exponents.
std::optional<bool> is_totally_unimodular(const Eigen::MatrixXd& exponents, bool force = false);

/// A bound of the form 2^log2_value. value() underflows to 0 (or overflows to
/// inf) gracefully; compare in log space when that matters.
struct Log2Bound {
  double log2_value = 0.0;
  double value() const { return std::exp2(log2_value); }
};

/// Lower bound on the boundary distance from the binary encoding length of a
/// rational instance: 2^-(6 n^2 max_i <w_i> + <theta> - n), with the exponent
/// improved to 3 n^2 max_i <w_i> - n when theta = 0. Requires rational_form.
Log2Bound r_theta_encoding_bound(const GpInstance& inst);

/// Lower bound on the facet gap: 2^-((6 n^2 + 1) max_i <w_i> - n).
Log2Bound facet_gap_encoding_bound(const GpInstance& inst);

/// Upper bound on the unary facet complexity of an integral exponent
/// polytope: 2^(3 n^3 max_i <w_i> - n).
Log2Bound ufc_encoding_bound(const GpInstance& inst);

struct TuBounds {
  double facet_gap_lower = 0.0;
  double r_theta_lower = 0.0;
};

/// Condition bounds for totally unimodular exponents: facet gap >= n^-3/2 and
/// boundary distance >= 2^-<theta> n^-3/2 (n^-3/2 when theta = 0; requires a
/// rational shift otherwise). assume_tu skips the certification for callers
/// with known structure (e.g. graph incidence).
TuBounds tu_condition_bounds(const GpInstance& inst, bool assume_tu = false, bool force = false);

/// Norm bound log(beta)/r for an attained minimizer (well-conditioned case).
double diameter_bound_well_conditioned(double beta, double r_theta);

/// Norm bound (m/phi) log(2 beta / delta) for some delta-approximate
/// minimizer, valid for any shift in the polytope. Requires 0 < delta < 2 beta.
double diameter_bound_facet_gap(int subspace_dim, double phi, double beta, double delta);

/// Summary of all condition measures of an instance.
struct ConditionReport {
  double R_theta = 0.0;
  double beta = 0.0;
  double diameter_N = 0.0;
  int subspace_dim = 0;
  std::optional<double> r_theta;          // absent when outside or facets skipped
  std::optional<double> facet_gap;        // absent when m == 0 or facets skipped
  std::optional<bool> well_conditioned;   // absent when facets skipped
  std::optional<MembershipResult> membership;
  bool facets_skipped = false;
  std::string skip_reason;
};

ConditionReport analyze_instance(const GpInstance& inst);

}  // namespace gpipm
