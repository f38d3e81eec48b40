#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gpipm/condition.hpp"
#include "gpipm/errors.hpp"
#include "gpipm/reductions.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace gpipm;

namespace {

std::vector<Facet> facets_of(const GpInstance& inst) {
  return enumerate_facets(inst.exponents(), polytope_basis(inst.exponents()));
}

}  // namespace

TEST_CASE("interval facets are its endpoints") {
  const auto inst = testing::interval_instance();
  const auto facets = facets_of(inst);
  REQUIRE(facets.size() == 2);
  // Deterministic order: sorted by support.
  CHECK(facets[0].support == std::vector<int>{0});
  CHECK(facets[0].normal(0) == doctest::Approx(-1.0));
  CHECK(facets[0].offset == doctest::Approx(0.0));
  CHECK(facets[1].support == std::vector<int>{2});
  CHECK(facets[1].normal(0) == doctest::Approx(1.0));
  CHECK(facets[1].offset == doctest::Approx(1.0));
}

TEST_CASE("unit square has four edges") {
  const auto inst = testing::unit_square_instance({0.25, 0.5});
  const auto facets = facets_of(inst);
  CHECK(facets.size() == 4);
  for (const auto& f : facets) CHECK(f.support.size() == 2);
}

TEST_CASE("scaling exponents: facet list is consistent with support sampling") {
  const auto inst = matrix_scaling_instance(testing::ones_scaling_problem());
  const auto basis = subspace_basis(inst);
  const auto facets = enumerate_facets(inst.exponents(), basis);
  CHECK(facets.size() == 4);  // a square with side sqrt(2)
  CHECK(oracle::support_consistency(inst.exponents(), basis, facets, 1000, 99));
}

TEST_CASE("facet invariants hold on random instances") {
  for (unsigned seed = 0; seed < 8; ++seed) {
    const auto inst = testing::random_wc_instance(300 + seed);
    const auto basis = subspace_basis(inst);
    const auto facets = enumerate_facets(inst.exponents(), basis);
    REQUIRE(!facets.empty());
    for (const auto& f : facets) {
      CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(basis.residual(f.normal) < 1e-9);  // normal lies in the span
      for (Eigen::Index i = 0; i < inst.term_count(); ++i)
        CHECK(f.normal.dot(inst.exponents().row(i)) <= f.offset + 1e-9);
      for (int idx : f.support)
        CHECK(f.normal.dot(inst.exponents().row(idx)) == doctest::Approx(f.offset).epsilon(1e-9));
      //

      // support spans an affine space of dimension m-1
      Eigen::MatrixXd pts(static_cast<Eigen::Index>(f.support.size()), inst.dim());
      for (std::size_t r = 0; r < f.support.size(); ++r)
        pts.row(static_cast<Eigen::Index>(r)) = inst.exponents().row(f.support[r]);
      if (pts.rows() > 1) {
        const Eigen::MatrixXd rel = pts.bottomRows(pts.rows() - 1).rowwise() - pts.row(0);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rel);
        Eigen::Index rank = 0;
        while (rank < svd.singularValues().size() &&
               svd.singularValues()(rank) > 1e-9 * std::max(1.0, svd.singularValues()(0)))
          ++rank;
        CHECK(rank == basis.dim() - 1);
      }
    }
    CHECK(oracle::support_consistency(inst.exponents(), basis, facets, 1000, 1234 + seed));
  }
}

TEST_CASE("boundary distance on the fixtures") {
  const auto interval = testing::interval_instance();
  const auto facets = facets_of(interval);
  CHECK(distance_to_boundary(interval.exponents(), facets, Eigen::VectorXd::Constant(1, 0.5)) ==
        doctest::Approx(0.5));
  CHECK(distance_to_boundary(interval.exponents(), facets, Eigen::VectorXd::Zero(1)) ==
        doctest::Approx(0.0));

  const auto square = testing::unit_square_instance({0.25, 0.5});
  const auto sq_facets = facets_of(square);
  CHECK(distance_to_boundary(square.exponents(), sq_facets, square.shift()) == doctest::Approx(0.25));
}

TEST_CASE("R, beta and N on the fixtures") {
  const auto inst = testing::facet_gap_instance(0.5);  // exponents {0, 1/2, 1}, shift 0
  CHECK(inst.enclosing_radius() == doctest::Approx(1.0));
  CHECK(inst.coefficient_ratio() == doctest::Approx(3.0));
  CHECK(exponent_diameter(inst.exponents()) == doctest::Approx(1.0));

  Eigen::MatrixXd single(1, 2);
  single << 0.3, 0.4;
  CHECK(exponent_diameter(single) == 0.0);
}

TEST_CASE("facet gap values") {
  SUBCASE("tight three-point example") {
    const auto inst = testing::facet_gap_instance(0.25);
    CHECK(facet_gap(inst.exponents(), facets_of(inst)) == doctest::Approx(0.25));
  }
  SUBCASE("unit square") {
    const auto inst = testing::unit_square_instance({0.5, 0.5});
    CHECK(facet_gap(inst.exponents(), facets_of(inst)) == doctest::Approx(1.0));
  }
  SUBCASE("2x2 scaling exponents beat the 1/sqrt(n) bound") {
    const auto inst = matrix_scaling_instance(testing::ones_scaling_problem());
    const double phi = facet_gap(inst.exponents(), facets_of(inst));
    CHECK(phi >= 1.0 / std::sqrt(4.0) - 1e-12);
    CHECK(phi == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("facet gap agrees with orthogonal-projection distances") {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const auto inst = testing::random_integral_instance(500 + seed);
    const auto facets = facets_of(inst);
    double via_projection = std::numeric_limits<double>::infinity();
    for (const auto& f : facets) {
      Eigen::MatrixXd pts(static_cast<Eigen::Index>(f.support.size()), inst.dim());
      for (std::size_t r = 0; r < f.support.size(); ++r)
        pts.row(static_cast<Eigen::Index>(r)) = inst.exponents().row(f.support[r]);
      std::size_t next = 0;
      for (Eigen::Index i = 0; i < inst.term_count(); ++i) {
        if (next < f.support.size() && f.support[next] == static_cast<int>(i)) {
          ++next;
          continue;
        }
        // distance to the affine span of the support points
        const Eigen::VectorXd rel = inst.exponents().row(i).transpose() - pts.row(0).transpose();
        if (pts.rows() == 1) {
          via_projection = std::min(via_projection, rel.norm());
          continue;
        }
        const Eigen::MatrixXd dirs = (pts.bottomRows(pts.rows() - 1).rowwise() - pts.row(0)).transpose();
        const Eigen::VectorXd coef = dirs.colPivHouseholderQr().solve(rel);
        via_projection = std::min(via_projection, (rel - dirs * coef).norm());
      }
    }
    const double phi = facet_gap(inst.exponents(), facets);
    CHECK(phi == doctest::Approx(via_projection).epsilon(1e-9));
  }
}

TEST_CASE("membership classification") {
  const auto inst = testing::interval_instance();
  const auto facets = facets_of(inst);
  const auto at = [&](double v) {
    return classify_membership(inst.exponents(), facets, Eigen::VectorXd::Constant(1, v));
  };
  CHECK(at(0.5).region == Region::Interior);
  CHECK(at(0.5).margin == doctest::Approx(0.5));
  CHECK(at(0.0).region == Region::Boundary);
  CHECK(at(0.0).margin == doctest::Approx(0.0));
  CHECK(at(-0.1).region == Region::Outside);
  CHECK(at(-0.1).margin == doctest::Approx(-0.1));
}

TEST_CASE("membership off the affine hull reports the residual") {
  const auto inst = testing::simplex_instance();
  const auto facets = facets_of(inst);
  Eigen::VectorXd off(3);
  off << 1.0 / 3, 1.0 / 3, 1.0 / 3 + 0.5;  // off the sum-one plane
  const auto result = classify_membership(inst.exponents(), facets, off);
  CHECK(result.region == Region::Outside);
  CHECK(result.margin < 0);
  CHECK(affine_hull_residual(inst.exponents(), off) == doctest::Approx(-result.margin));
}

TEST_CASE("dual expression for the boundary distance") {
  std::mt19937 rng(4242);
  std::normal_distribution<double> normal;
  for (unsigned seed = 0; seed < 3; ++seed) {
    const auto inst = testing::random_wc_instance(700 + seed);
    const auto basis = subspace_basis(inst);
    const auto facets = facets_of(inst);
    const double r = distance_to_boundary(inst.exponents(), facets, inst.shift());

    double attained = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 1000; ++s) {
      Eigen::VectorXd w(basis.dim());
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
      const Eigen::VectorXd u = basis.lift(w / w.norm());
      const double support_val = (inst.shifted_exponents() * u).maxCoeff();
      CHECK(support_val >= r - 1e-9);
      attained = std::min(attained, support_val);
    }
    // The minimizing facet normal attains the distance exactly.
    const auto worst = std::min_element(facets.begin(), facets.end(), [&](const auto& a, const auto& b) {
      return a.offset - a.normal.dot(inst.shift()) < b.offset - b.normal.dot(inst.shift());
    });
    const double along_normal = (inst.shifted_exponents() * worst->normal).maxCoeff();
    CHECK(along_normal == doctest::Approx(r).epsilon(1e-9));
    CHECK(attained >= r - 1e-9);
  }
}

TEST_CASE("boundary distance is midpoint-concave in the shift") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto inst = testing::unit_square_instance({0.5, 0.5});
  const auto facets = facets_of(inst);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a(2), b(2);
    a << unif(rng), unif(rng);
    b << unif(rng), unif(rng);
    const double ra = signed_boundary_distance(facets, a);
    const double rb = signed_boundary_distance(facets, b);
    const double rm = signed_boundary_distance(facets, 0.5 * (a + b));
    CHECK(rm >= 0.5 * (ra + rb) - 1e-9);
  }
}

TEST_CASE("total unimodularity checks") {
  SUBCASE("directed path incidence") {
    Eigen::MatrixXd exps(2, 3);
    exps << 1, -1, 0, 0, 1, -1;  // arcs 1->2, 2->3
    CHECK(is_totally_unimodular(exps) == std::optional<bool>(true));
  }
  SUBCASE("2x2 with determinant -2") {
    Eigen::MatrixXd exps(2, 2);
    exps << 1, 1, 1, -1;  // columns (1,1) and (1,-1)
    CHECK(is_totally_unimodular(exps) == std::optional<bool>(false));
  }
  SUBCASE("identity columns") {
    CHECK(is_totally_unimodular(Eigen::MatrixXd::Identity(4, 4)) == std::optional<bool>(true));
  }
  SUBCASE("entry of absolute value two") {
    Eigen::MatrixXd exps(1, 1);
    exps << 2;
    CHECK(is_totally_unimodular(exps) == std::optional<bool>(false));
  }
  SUBCASE("non-integral input") {
    Eigen::MatrixXd exps(1, 1);
    exps << 0.5;
    CHECK_THROWS_AS(is_totally_unimodular(exps), InputError);
  }
  SUBCASE("size guard") {
    const Eigen::MatrixXd big = Eigen::MatrixXd::Identity(9, 9);
    CHECK(!is_totally_unimodular(big).has_value());
    CHECK(is_totally_unimodular(big, /*force=*/true) == std::optional<bool>(true));
  }
}

TEST_CASE("encoding-length bounds hold on random rational instances") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_integral_instance(900 + seed);
    const auto facets = facets_of(inst);

    const double phi = facet_gap(inst.exponents(), facets);
    const auto phi_bound = facet_gap_encoding_bound(inst);
    CHECK(std::log2(phi) >= phi_bound.log2_value);

    const double r = distance_to_boundary(inst.exponents(), facets, inst.shift());
    REQUIRE(r > 0);  // barycenter shift
    const auto r_bound = r_theta_encoding_bound(inst);
    CHECK(std::log2(r) >= r_bound.log2_value);
  }
}

TEST_CASE("zero shift uses the sharper exponent") {
  Eigen::MatrixXd exps(2, 1);
  exps << 0.0, 1.0;
  RationalForm form;
  form.exponents = {testing::rationals({"0"}), testing::rationals({"1"})};
  form.shift = testing::rationals({"0"});
  const GpInstance zero_shift(exps, Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(1), form);
  RationalForm half;
  half.exponents = form.exponents;
  half.shift = testing::rationals({"1/2"});
  const GpInstance half_shift(exps, Eigen::VectorXd::Ones(2), Eigen::VectorXd::Constant(1, 0.5), half);

  // <0> = 2, <1> = 3 under the pinned convention, so max <w> = 3.
  CHECK(r_theta_encoding_bound(zero_shift).log2_value == doctest::Approx(-(3.0 * 3 - 1)));
  // <1/2> = 4: exponent 6*3 + 4 - 1 = 21.
  CHECK(r_theta_encoding_bound(half_shift).log2_value == doctest::Approx(-21.0));
  const double bound = r_theta_encoding_bound(half_shift).value();
  CHECK(bound > 0.0);
  CHECK(bound <= 0.5);
}

TEST_CASE("unary facet complexity bounds") {
  const auto square = testing::unit_square_instance({0.5, 0.5});
  RationalForm form;
  form.exponents = {testing::rationals({"0", "0"}), testing::rationals({"1", "0"}),
                    testing::rationals({"0", "1"}), testing::rationals({"1", "1"})};
  form.shift = testing::rationals({"1/2", "1/2"});
  const GpInstance exact(square.exponents(), square.coefficients(), square.shift(), form);

  const auto bound = ufc_encoding_bound(exact);
  CHECK(bound.value() >= 1.0);  // the true ufc of the axis-aligned square is 1

  // 1/phi <= sqrt(n) * ufc with the known ufc values of the fixtures.
  const double phi_square = facet_gap(square.exponents(), facets_of(square));
  CHECK(1.0 / phi_square <= std::sqrt(2.0) * 1.0 + 1e-12);

  const auto interval = testing::interval_instance();
  const double phi_iv = facet_gap(interval.exponents(), facets_of(interval));
  CHECK(1.0 / phi_iv <= std::sqrt(1.0) * 2.0 + 1e-12);  // normals 0/1: ufc(interval in [0,1]) <= 2

  const auto scaling = matrix_scaling_instance(testing::ones_scaling_problem());
  const double phi_sc = facet_gap(scaling.exponents(), facets_of(scaling));
  CHECK(1.0 / phi_sc <= std::sqrt(4.0) * 1.0 + 1e-12);  // scaling polytopes have ufc 1

  Eigen::MatrixXd bad(1, 1);
  bad << 0.5;
  CHECK_THROWS_AS(ufc_encoding_bound(GpInstance(bad, Eigen::VectorXd::Ones(1),
                                                Eigen::VectorXd::Zero(1))),
                  InputError);
}

TEST_CASE("totally unimodular condition bounds") {
  SUBCASE("complete digraph on three vertices") {
    const auto inst = matrix_balancing_instance(Eigen::MatrixXd::Ones(3, 3));
    const auto bounds = tu_condition_bounds(inst);
    CHECK(bounds.r_theta_lower == doctest::Approx(std::pow(3.0, -1.5)));
    CHECK(bounds.facet_gap_lower == doctest::Approx(std::pow(3.0, -1.5)));
  }
  SUBCASE("digraph incidence instances meet the facet-gap bound") {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const int n = 3 + static_cast<int>(seed % 4);  // up to 6 vertices
      const auto inst = testing::random_digraph_instance(1300 + seed, n);
      CHECK(is_totally_unimodular(inst.exponents()) == std::optional<bool>(true));
      const auto bounds = tu_condition_bounds(inst);
      const double phi = facet_gap(inst.exponents(), facets_of(inst));
      CHECK(phi >= bounds.facet_gap_lower - 1e-12);
    }
  }
  SUBCASE("simplex columns") {
    const auto inst = testing::simplex_instance();
    const auto bounds = tu_condition_bounds(inst);
    const double phi = facet_gap(inst.exponents(), facets_of(inst));
    CHECK(phi == doctest::Approx(std::sqrt(2.0) * std::sqrt(3.0) / 2.0));
    CHECK(bounds.facet_gap_lower <= phi);
  }
  SUBCASE("rejects non-TU input") {
    Eigen::MatrixXd exps(2, 2);
    exps << 1, 1, 1, -1;
    CHECK_THROWS_AS(tu_condition_bounds(GpInstance(exps, Eigen::VectorXd::Ones(2),
                                                   Eigen::VectorXd::Zero(2))),
                    InputError);
  }
}

TEST_CASE("diameter bound formulas") {
  CHECK(diameter_bound_well_conditioned(3.0, 0.5) == doctest::Approx(std::log(3.0) / 0.5));
  CHECK_THROWS_AS(diameter_bound_well_conditioned(3.0, 0.0), InputError);
  CHECK(diameter_bound_facet_gap(1, 0.25, 3.0, 1e-2) ==
        doctest::Approx(4.0 * std::log(600.0)));
  CHECK_THROWS_AS(diameter_bound_facet_gap(1, 0.25, 3.0, 7.0), InputError);
}

TEST_CASE("oracle minimizer norms respect the well-conditioned diameter bound") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_wc_instance(2200 + seed);
    const auto facets = facets_of(inst);
    const double r = distance_to_boundary(inst.exponents(), facets, inst.shift());
    REQUIRE(r > 0);
    const double bound = diameter_bound_well_conditioned(inst.coefficient_ratio(), r);
    const auto result = oracle::reference_minimize(inst, 1e-10, 5000, 10.0 * bound + 10.0);
    CHECK(result.x_star.norm() <= bound + 1e-9);
  }
}

TEST_CASE("condition report on the fixtures") {
  const auto report = analyze_instance(testing::interval_instance());
  REQUIRE(report.r_theta.has_value());
  CHECK(*report.r_theta == doctest::Approx(0.5));
  CHECK(report.R_theta == doctest::Approx(0.5));
  CHECK(report.beta == doctest::Approx(3.0));
  CHECK(report.diameter_N == doctest::Approx(1.0));
  REQUIRE(report.facet_gap.has_value());
  CHECK(*report.facet_gap == doctest::Approx(0.5));
  CHECK(report.subspace_dim == 1);
  CHECK(report.well_conditioned == std::optional<bool>(true));
  CHECK(!report.facets_skipped);

  CHECK(*report.r_theta <= report.R_theta);
  CHECK(report.diameter_N <= 2.0 * report.R_theta + 1e-12);
  CHECK(report.beta >= static_cast<double>(3));

  SUBCASE("outside shift") {
    const auto outside = analyze_instance(testing::zero_one_instance(-0.1));
    CHECK(!outside.r_theta.has_value());
    CHECK(outside.well_conditioned == std::optional<bool>(false));
    REQUIRE(outside.membership.has_value());
    CHECK(outside.membership->region == Region::Outside);
  }
  SUBCASE("size guard skips facets") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXd exps(25, 3);
    for (Eigen::Index i = 0; i < exps.rows(); ++i)
      for (Eigen::Index j = 0; j < 3; ++j) exps(i, j) = unif(rng);
    const GpInstance big(exps, Eigen::VectorXd::Ones(25), Eigen::VectorXd::Zero(3));
    const auto guarded = analyze_instance(big);
    CHECK(guarded.facets_skipped);
    CHECK(!guarded.r_theta.has_value());
    CHECK(!guarded.facet_gap.has_value());
    CHECK(guarded.skip_reason == "skipped (size guard)");
  }
}

TEST_CASE("boundary distance rejects shifts off the affine hull") {
  const auto inst = testing::simplex_instance();
  const auto facets = facets_of(inst);
  Eigen::VectorXd off(3);
  off << 0.5, 0.5, 0.5;  // coordinate sum 1.5, off the sum-one plane
  CHECK_THROWS_AS(distance_to_boundary(inst.exponents(), facets, off), InputError);
}

TEST_CASE("facet enumeration guards") {
  const auto inst = testing::interval_instance();
  Eigen::MatrixXd point(1, 1);
  point << 0.5;
  const GpInstance degenerate(point, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 0.5));
  CHECK_THROWS_AS(enumerate_facets(degenerate.exponents(), subspace_basis(degenerate)), InputError);
  CHECK_THROWS_AS(
      distance_to_boundary(inst.exponents(), facets_of(inst), Eigen::VectorXd::Zero(0)),
      InputError);
}
