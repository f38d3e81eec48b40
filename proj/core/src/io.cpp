#include "gpipm/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gpipm/errors.hpp"

namespace gpipm {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct ParsedEntry {
  double value = 0.0;
  std::optional<Rational> exact;
};

ParsedEntry parse_entry(const json& j, const char* what) {
  ParsedEntry entry;
  if (j.is_string()) {
    entry.exact = parse_rational(j.get<std::string>());
    entry.value = to_double(*entry.exact);
  } else if (j.is_number_integer()) {
    entry.exact = Rational(BigInt(j.get<long long>()));
    entry.value = static_cast<double>(j.get<long long>());
  } else if (j.is_number()) {
    entry.value = j.get<double>();
  } else {
    throw InputError(std::string(what) + " entries must be numbers or \"p/q\" strings");
  }
  return entry;
}

json facet_to_json(const Facet& f) {
  json j;
  j["normal"] = std::vector<double>(f.normal.data(), f.normal.data() + f.normal.size());
  j["offset"] = f.offset;
  j["support"] = f.support;
  return j;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

const char* region_name(Region region) {
  switch (region) {
    case Region::Interior: return "interior";
    case Region::Boundary: return "boundary";
    case Region::Outside: return "outside";
  }
  return "unknown";
}

}  // namespace

GpInstance parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid instance JSON: ") + e.what());
  }
  if (!j.contains("exponents") || !j.contains("coefficients") || !j.contains("shift"))
    throw InputError("instance JSON needs \"exponents\", \"coefficients\" and \"shift\"");
  const auto& jexp = j["exponents"];
  const auto& jq = j["coefficients"];
  const auto& jshift = j["shift"];
  if (!jexp.is_array() || jexp.empty() || !jexp[0].is_array())
    throw InputError("\"exponents\" must be a nonempty array of arrays");
  const auto k = static_cast<Eigen::Index>(jexp.size());
  const auto n = static_cast<Eigen::Index>(jexp[0].size());

  bool all_exact = true;
  RationalForm form;
  form.exponents.resize(static_cast<std::size_t>(k));

  Eigen::MatrixXd exponents(k, n);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& row = jexp[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw InputError("exponent rows must all have the same length");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto entry = parse_entry(row[static_cast<std::size_t>(c)], "exponent");
      exponents(i, c) = entry.value;
      if (entry.exact)
        form.exponents[static_cast<std::size_t>(i)].push_back(*entry.exact);
      else
        all_exact = false;
    }
  }

  if (!jq.is_array() || static_cast<Eigen::Index>(jq.size()) != k)
    throw InputError("\"coefficients\" must have one entry per exponent row");
  Eigen::VectorXd coefficients(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& v = jq[static_cast<std::size_t>(i)];
    if (!v.is_number()) throw InputError("coefficients must be numbers");
    coefficients(i) = v.get<double>();
  }

  if (!jshift.is_array() || static_cast<Eigen::Index>(jshift.size()) != n)
    throw InputError("\"shift\" must have the exponent dimension");
  Eigen::VectorXd shift(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto entry = parse_entry(jshift[static_cast<std::size_t>(c)], "shift");
    shift(c) = entry.value;
    if (entry.exact)
      form.shift.push_back(*entry.exact);
    else
      all_exact = false;
  }

  std::optional<RationalForm> rational;
  if (all_exact) rational = std::move(form);
  return GpInstance(std::move(exponents), std::move(coefficients), std::move(shift),
                    std::move(rational));
}

GpInstance load_instance(const std::string& path) { return parse_instance_json(read_file(path)); }

std::string instance_to_json(const GpInstance& inst) {
  json j;
  const auto& form = inst.rational_form();
  json exps = json::array();
  for (Eigen::Index i = 0; i < inst.term_count(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < inst.dim(); ++c) {
      if (form) {
        const auto& r = form->exponents[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        if (boost::multiprecision::denominator(r) == 1 &&
            boost::multiprecision::abs(boost::multiprecision::numerator(r)) <
                BigInt(1) << 53) {
          row.push_back(static_cast<long long>(boost::multiprecision::numerator(r)));
        } else {
          row.push_back(rational_to_string(r));
        }
      } else {
        row.push_back(inst.exponents()(i, c));
      }
    }
    exps.push_back(std::move(row));
  }
  j["exponents"] = std::move(exps);
  j["coefficients"] = to_std(inst.coefficients());
  json shift = json::array();
  for (Eigen::Index c = 0; c < inst.dim(); ++c) {
    if (form) {
      const auto& r = form->shift[static_cast<std::size_t>(c)];
      if (boost::multiprecision::denominator(r) == 1 &&
          boost::multiprecision::abs(boost::multiprecision::numerator(r)) < BigInt(1) << 53) {
        shift.push_back(static_cast<long long>(boost::multiprecision::numerator(r)));
      } else {
        shift.push_back(rational_to_string(r));
      }
    } else {
      shift.push_back(inst.shift()(c));
    }
  }
  j["shift"] = std::move(shift);
  return j.dump(2);
}

namespace {

ScalingProblem scaling_from_matrix(Eigen::MatrixXd m, std::optional<Eigen::VectorXd> r,
                                   std::optional<Eigen::VectorXd> c) {
  const Eigen::Index n = m.rows();
  ScalingProblem sp;
  sp.matrix = std::move(m);
  sp.row_targets = r ? std::move(*r) : Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  sp.col_targets = c ? std::move(*c) : Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  sp.validate();
  return sp;
}

Eigen::MatrixXd dense_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array())
    throw InputError("matrix JSON must be an array of arrays");
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != nc)
      throw InputError("matrix rows must all have the same length");
    for (Eigen::Index j = 0; j < nc; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

// One "row col value" line per nonzero, 0-indexed; the matrix is square with
// dimension 1 + the largest index seen.
Eigen::MatrixXd triplets_from_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
  Eigen::Index dim = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    long long r = 0, c = 0;
    double v = 0.0;
    if (!(fields >> r >> c >> v)) throw InputError("bad triplet line: \"" + line + "\"");
    if (r < 0 || c < 0) throw InputError("triplet indices must be nonnegative");
    entries.emplace_back(r, c, v);
    dim = std::max<Eigen::Index>(dim, std::max<Eigen::Index>(r, c) + 1);
  }
  if (entries.empty()) throw InputError("triplet file has no entries");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [r, c, v] : entries) m(r, c) = v;
  return m;
}

}  // namespace

Eigen::MatrixXd load_matrix(const std::string& path) {
  const std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return triplets_from_text(text);
  if (j.is_array()) return dense_from_json(j);
  if (j.is_object() && j.contains("matrix")) return dense_from_json(j["matrix"]);
  throw InputError("matrix file must be a JSON array, an object with \"matrix\", or triplets");
}

ScalingProblem load_scaling_problem(const std::string& path) {
  const std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return scaling_from_matrix(triplets_from_text(text), {}, {});
  if (j.is_array()) return scaling_from_matrix(dense_from_json(j), {}, {});
  if (j.is_object() && j.contains("matrix")) {
    std::optional<Eigen::VectorXd> r, c;
    if (j.contains("row_targets")) r = vector_from_json(j["row_targets"]);
    if (j.contains("col_targets")) c = vector_from_json(j["col_targets"]);
    return scaling_from_matrix(dense_from_json(j["matrix"]), std::move(r), std::move(c));
  }
  throw InputError("matrix file must be a JSON array, an object with \"matrix\", or triplets");
}

std::string condition_report_to_json(const ConditionReport& report, const std::vector<Facet>* facets) {
  json j;
  j["R_theta"] = report.R_theta;
  j["beta"] = report.beta;
  j["diameter_N"] = report.diameter_N;
  j["subspace_dim"] = report.subspace_dim;
  const json skipped = "skipped (size guard)";
  j["r_theta"] = report.r_theta ? json(*report.r_theta)
                                : (report.facets_skipped ? skipped : json(nullptr));
  j["facet_gap"] = report.facet_gap ? json(*report.facet_gap)
                                    : (report.facets_skipped ? skipped : json(nullptr));
  j["well_conditioned"] = report.well_conditioned ? json(*report.well_conditioned)
                                                  : (report.facets_skipped ? skipped : json(nullptr));
  if (report.membership) {
    j["membership"] = {{"region", region_name(report.membership->region)},
                       {"margin", report.membership->margin}};
  } else if (report.facets_skipped) {
    j["membership"] = skipped;
  }
  if (facets) {
    json arr = json::array();
    for (const auto& f : *facets) arr.push_back(facet_to_json(f));
    j["facets"] = std::move(arr);
  }
  return j.dump(2);
}

std::string solve_result_to_json(const SolveResult& result) {
  json j;
  j["x"] = to_std(result.x);
  j["F_theta"] = result.objective;
  j["gradient_norm"] = result.gradient_norm;
  j["certified_gap"] = result.certified_gap;
  j["iterations"] = result.total_iterations();
  j["preliminary_iterations"] = result.preliminary_iterations;
  j["main_iterations"] = result.main_iterations;
  j["mode"] = result.mode == SolveMode::WellConditioned ? "well-conditioned" : "general";
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  return j.dump(2);
}

std::string scaling_result_to_json(const SolveResult& result, const ScalingFactors& factors) {
  json j = json::parse(solve_result_to_json(result));
  j["L"] = to_std(factors.left);
  j["R"] = to_std(factors.right);
  const double total = factors.rescaled.sum();
  j["row_sums"] = to_std(factors.rescaled.rowwise().sum() / total);
  j["col_sums"] = to_std((factors.rescaled.colwise().sum() / total).transpose());
  j["residual_norm"] = factors.residual_norm;
  return j.dump(2);
}

std::string weak_membership_to_json(const WeakMembershipResult& result, double epsilon) {
  json j;
  j["assertion"] = result.distance_within_epsilon ? "distance_at_most_epsilon" : "ball_not_contained";
  j["epsilon"] = epsilon;
  j["gradient_norm"] = result.gradient_norm;
  j["iterations"] = result.iterations;
  j["note"] = result.note;
  return j.dump(2);
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  out << "stage,iter,parameter,decrement,t,min_slack,ridge_used\n";
  out << std::setprecision(17);
  for (const auto& row : trace.rows) {
    out << (row.stage == Stage::Preliminary ? "preliminary" : "main") << ',' << row.iter << ','
        << row.parameter << ',' << row.decrement << ',' << row.objective_t << ',' << row.min_slack
        << ',' << (row.ridge_used ? 1 : 0) << '\n';
  }
}

void write_trace_csv(const IterationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file: " + path);
  write_trace_csv(trace, out);
}

}  // namespace gpipm
