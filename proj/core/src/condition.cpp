#include "gpipm/condition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gpipm/errors.hpp"

namespace gpipm {

SubspaceBasis polytope_basis(const Eigen::MatrixXd& exponents) {
  const Eigen::RowVectorXd mean = exponents.colwise().mean();
  const Eigen::MatrixXd centered = exponents.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * top) ++rank;
  return SubspaceBasis{svd.matrixV().leftCols(rank)};
}

namespace {

bool next_combination(std::vector<int>& idx, int n) {
  const int r = static_cast<int>(idx.size());
  for (int i = r - 1; i >= 0; --i) {
    if (idx[i] < n - r + i) {
      ++idx[i];
      for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Fraction-free determinant of a dense s x s integer matrix. Intermediate
// entries are subdeterminants of the input, so for entries in {-1,0,1} and
// s <= 8 they stay far below the int64 range.
long long bareiss_det(std::vector<long long> a, int s) {
  long long prev = 1;
  int sign = 1;
  for (int p = 0; p < s; ++p) {
    if (a[p * s + p] == 0) {
      int pivot_row = -1;
      for (int r = p + 1; r < s; ++r) {
        if (a[r * s + p] != 0) {
          pivot_row = r;
          break;
        }
      }
      if (pivot_row < 0) return 0;
      for (int c = 0; c < s; ++c) std::swap(a[p * s + c], a[pivot_row * s + c]);
      sign = -sign;
    }
    for (int r = p + 1; r < s; ++r) {
      for (int c = p + 1; c < s; ++c) {
        a[r * s + c] = (a[r * s + c] * a[p * s + p] - a[r * s + p] * a[p * s + c]) / prev;
      }
      a[r * s + p] = 0;
    }
    prev = a[p * s + p];
  }
  return sign * a[(s - 1) * s + (s - 1)];
}

long max_exponent_encoding(const GpInstance& inst) {
  const auto& form = inst.rational_form();
  if (!form) throw InputError("encoding-length bounds need the exact rational form");
  long max_enc = 0;
  for (const auto& row : form->exponents) max_enc = std::max(max_enc, encoding_length(row));
  return max_enc;
}

}  // namespace

std::vector<Facet> enumerate_facets(const Eigen::MatrixXd& exponents, const SubspaceBasis& basis) {
  const Eigen::Index k = exponents.rows();
  const Eigen::Index m = basis.dim();
  if (m == 0) throw InputError("polytope is a point; it has no facets");
  if (m > kMaxFacetSubspace || k > kMaxFacetTerms)
    throw InputError("facet enumeration size guard exceeded (k <= 20, dim <= 5)");

  // Coordinates in the subspace, relative to the first exponent.
  const Eigen::RowVectorXd base = exponents.row(0);
  const Eigen::MatrixXd pts = (exponents.rowwise() - base) * basis.basis;  // k x m

  std::map<std::vector<int>, Eigen::VectorXd> by_support;
  std::vector<int> subset(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) subset[static_cast<std::size_t>(i)] = static_cast<int>(i);

  do {
    Eigen::VectorXd normal(m);
    if (m == 1) {
      normal(0) = 1.0;
    } else {
      Eigen::MatrixXd diffs(m - 1, m);
      for (Eigen::Index r = 0; r + 1 < m; ++r)
        diffs.row(r) = pts.row(subset[static_cast<std::size_t>(r) + 1]) - pts.row(subset[0]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) <= kGeomTol * std::max(1.0, sv(0))) continue;  // affinely dependent
      normal = svd.matrixV().col(m - 1);
    }

    const Eigen::VectorXd vals = pts * normal;
    const double ref = vals(subset[0]);
    const bool all_below = (vals.array() <= ref + kGeomTol).all();
    const bool all_above = (vals.array() >= ref - kGeomTol).all();
    if (!all_below && !all_above) continue;  // not supporting
    Eigen::VectorXd outward = all_below ? normal : Eigen::VectorXd(-normal);
    const Eigen::VectorXd ovals = pts * outward;
    const double top = ovals.maxCoeff();

    std::vector<int> support;
    for (Eigen::Index i = 0; i < k; ++i)
      if (ovals(i) >= top - kGeomTol) support.push_back(static_cast<int>(i));
    if (static_cast<Eigen::Index>(support.size()) == k)
      throw InputError("exponents do not affinely span the given subspace");
    by_support.emplace(std::move(support), std::move(outward));
  } while (next_combination(subset, static_cast<int>(k)));

  std::vector<Facet> facets;
  facets.reserve(by_support.size());
  for (const auto& [support, normal_w] : by_support) {
    Facet f;
    f.normal = basis.lift(normal_w);
    f.normal /= f.normal.norm();
    f.offset = (exponents * f.normal).maxCoeff();
    f.support = support;
    facets.push_back(std::move(f));
  }
  return facets;
}

double signed_boundary_distance(const std::vector<Facet>& facets, const Eigen::VectorXd& theta) {
  if (facets.empty()) throw InputError("empty facet list");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : facets) best = std::min(best, f.offset - f.normal.dot(theta));
  return best;
}

double distance_to_boundary(const Eigen::MatrixXd& exponents, const std::vector<Facet>& facets,
                            const Eigen::VectorXd& theta) {
  if (affine_hull_residual(exponents, theta) > kGeomTol)
    throw InputError("shift is outside the affine hull of the exponents");
  return signed_boundary_distance(facets, theta);
}

double exponent_diameter(const Eigen::MatrixXd& exponents) {
  const Eigen::Index k = exponents.rows();
  double best = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      best = std::max(best, (exponents.row(i) - exponents.row(j)).norm());
  return best;
}

double facet_gap(const Eigen::MatrixXd& exponents, const std::vector<Facet>& facets) {
  if (facets.empty()) throw InputError("facet gap needs a nonempty facet list");
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& f : facets) {
    std::size_t next = 0;
    for (Eigen::Index i = 0; i < exponents.rows(); ++i) {
      if (next < f.support.size() && f.support[next] == static_cast<int>(i)) {
        ++next;
        continue;
      }
      // Distance to the affine span of the facet; valid because the normal
      // is a unit vector of the direction space and the exponent lies in the
      // affine hull.
      gap = std::min(gap, f.offset - f.normal.dot(exponents.row(i)));
    }
  }
  return gap;
}

MembershipResult classify_membership(const Eigen::MatrixXd& exponents,
                                     const std::vector<Facet>& facets,
                                     const Eigen::VectorXd& theta) {
  const double resid = affine_hull_residual(exponents, theta);
  if (resid > kGeomTol) return MembershipResult{Region::Outside, -resid};
  const double margin = signed_boundary_distance(facets, theta);
  MembershipResult result;
  result.margin = margin;
  if (margin > kGeomTol) {
    result.region = Region::Interior;
  } else if (margin < -kGeomTol) {
    result.region = Region::Outside;
  } else {
    result.region = Region::Boundary;
  }
  return result;
}

std::optional<bool> is_totally_unimodular(const Eigen::MatrixXd& exponents, bool force) {
  const Eigen::Index k = exponents.rows();
  const Eigen::Index n = exponents.cols();
  // Columns of the checked matrix are the exponents, so it is n x k.
  std::vector<long long> a(static_cast<std::size_t>(n * k));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = exponents(i, j);
      const double r = std::round(v);
      if (std::abs(v - r) > kGeomTol)
        throw InputError("total unimodularity requires integral exponents");
      a[static_cast<std::size_t>(j * k + i)] = static_cast<long long>(r);
    }
  }
  const int smax = static_cast<int>(std::min(n, k));
  if (smax > 8 && !force) return std::nullopt;

  for (const long long v : a)
    if (v < -1 || v > 1) return false;  // a 1x1 subdeterminant already fails

  std::vector<long long> sub;
  for (int s = 2; s <= smax; ++s) {
    std::vector<int> rows(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) rows[static_cast<std::size_t>(i)] = i;
    do {
      std::vector<int> cols(static_cast<std::size_t>(s));
      for (int i = 0; i < s; ++i) cols[static_cast<std::size_t>(i)] = i;
      do {
        sub.assign(static_cast<std::size_t>(s * s), 0);
        for (int r = 0; r < s; ++r)
          for (int c = 0; c < s; ++c)
            sub[static_cast<std::size_t>(r * s + c)] =
                a[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)] * k +
                                           cols[static_cast<std::size_t>(c)])];
        const long long det = bareiss_det(sub, s);
        if (det < -1 || det > 1) return false;
      } while (next_combination(cols, static_cast<int>(k)));
    } while (next_combination(rows, static_cast<int>(n)));
  }
  return true;
}

Log2Bound r_theta_encoding_bound(const GpInstance& inst) {
  const long max_enc = max_exponent_encoding(inst);
  const auto& form = inst.rational_form();
  const double n = static_cast<double>(inst.dim());
  bool shift_zero = true;
  for (const auto& v : form->shift) shift_zero = shift_zero && (v == 0);
  if (shift_zero) return Log2Bound{-(3.0 * n * n * static_cast<double>(max_enc) - n)};
  const long shift_enc = encoding_length(form->shift);
  return Log2Bound{-(6.0 * n * n * static_cast<double>(max_enc) + static_cast<double>(shift_enc) - n)};
}

Log2Bound facet_gap_encoding_bound(const GpInstance& inst) {
  const long max_enc = max_exponent_encoding(inst);
  const double n = static_cast<double>(inst.dim());
  return Log2Bound{-((6.0 * n * n + 1.0) * static_cast<double>(max_enc) - n)};
}

Log2Bound ufc_encoding_bound(const GpInstance& inst) {
  const auto& form = inst.rational_form();
  if (!form) throw InputError("encoding-length bounds need the exact rational form");
  for (const auto& row : form->exponents)
    for (const auto& v : row)
      if (boost::multiprecision::denominator(v) != 1)
        throw InputError("unary facet complexity is defined for integral exponents");
  const long max_enc = max_exponent_encoding(inst);
  const double n = static_cast<double>(inst.dim());
  return Log2Bound{3.0 * n * n * n * static_cast<double>(max_enc) - n};
}

TuBounds tu_condition_bounds(const GpInstance& inst, bool assume_tu, bool force) {
  if (!assume_tu) {
    const auto tu = is_totally_unimodular(inst.exponents(), force);
    if (!tu.has_value())
      throw InputError("total unimodularity undecided (size guard); pass force or assume_tu");
    if (!*tu) throw InputError("instance is not totally unimodular");
  }
  const double n = static_cast<double>(inst.dim());
  TuBounds bounds;
  bounds.facet_gap_lower = std::pow(n, -1.5);
  if (inst.shift().isZero(0.0)) {
    bounds.r_theta_lower = std::pow(n, -1.5);
  } else {
    const auto& form = inst.rational_form();
    if (!form) throw InputError("nonzero shift needs the exact rational form for the bound");
    bounds.r_theta_lower = std::exp2(-static_cast<double>(encoding_length(form->shift))) * std::pow(n, -1.5);
  }
  return bounds;
}

double diameter_bound_well_conditioned(double beta, double r_theta) {
  if (!(r_theta > 0)) throw InputError("well-conditioned diameter bound needs r_theta > 0");
  if (!(beta >= 1)) throw InputError("beta must be at least 1");
  return std::log(beta) / r_theta;
}

double diameter_bound_facet_gap(int subspace_dim, double phi, double beta, double delta) {
  if (!(phi > 0) || subspace_dim < 1) throw InputError("facet-gap diameter bound needs phi > 0, m >= 1");
  if (!(delta > 0 && delta < 2 * beta)) throw InputError("facet-gap diameter bound needs 0 < delta < 2 beta");
  return (static_cast<double>(subspace_dim) / phi) * std::log(2 * beta / delta);
}

ConditionReport analyze_instance(const GpInstance& inst) {
  ConditionReport report;
  report.R_theta = inst.enclosing_radius();
  report.beta = inst.coefficient_ratio();
  report.diameter_N = inst.term_count() > 1 ? exponent_diameter(inst.exponents()) : 0.0;
  const SubspaceBasis basis = subspace_basis(inst);
  report.subspace_dim = static_cast<int>(basis.dim());

  const SubspaceBasis poly_basis = polytope_basis(inst.exponents());
  const double resid = affine_hull_residual(inst.exponents(), inst.shift());

  if (poly_basis.dim() == 0) {
    // Single-point polytope: the program is constant.
    if ((inst.shift() - inst.exponents().row(0).transpose()).norm() <= kGeomTol) {
      report.membership = MembershipResult{Region::Interior, 0.0};
      report.well_conditioned = true;
    } else {
      report.membership =
          MembershipResult{Region::Outside, -(inst.shift() - inst.exponents().row(0).transpose()).norm()};
      report.well_conditioned = false;
    }
    return report;
  }

  if (inst.term_count() > kMaxFacetTerms || poly_basis.dim() > kMaxFacetSubspace) {
    report.facets_skipped = true;
    report.skip_reason = "skipped (size guard)";
    return report;
  }

  const auto facets = enumerate_facets(inst.exponents(), poly_basis);
  report.facet_gap = facet_gap(inst.exponents(), facets);
  const auto membership = classify_membership(inst.exponents(), facets, inst.shift());
  report.membership = membership;
  if (resid > kGeomTol || membership.region == Region::Outside) {
    report.well_conditioned = false;
  } else {
    report.r_theta = std::max(membership.margin, 0.0);
    report.well_conditioned = membership.region == Region::Interior;
  }
  return report;
}

}  // namespace gpipm
