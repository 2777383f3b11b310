#include "polyspec/json_io.hpp"

#include <limits>

#include "polyspec/errors.hpp"

namespace polyspec {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

// Serializes +-infinity as string sentinels (JSON has no infinity literal).
json finite_or_sentinel(double x) {
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  if (x == -std::numeric_limits<double>::infinity()) return "-inf";
  return x;
}

void require_fields(const json& j, std::initializer_list<const char*> fields,
                    const char* what) {
  if (!j.is_object()) throw ParameterError(std::string(what) + ": expected a JSON object");
  for (const char* f : fields) {
    if (!j.contains(f)) {
      throw ParameterError(std::string(what) + ": missing field '" + f + "'");
    }
  }
}

}  // namespace

json to_json(const VertexPolygon& p) {
  return json{{"d", p.d}, {"l", p.edge_length}, {"vertices", matrix_to_json(p.y)}};
}

json to_json(const AnglePolygon& a) {
  return json{
      {"N", a.size()}, {"l", a.edge_length}, {"phi", a.phi}, {"beta", a.beta}, {"w", a.winding}};
}

VertexPolygon vertex_polygon_from_json(const json& j) {
  require_fields(j, {"d", "l", "vertices"}, "vertex polygon");
  const int d = j.at("d").get<int>();
  const double l = j.at("l").get<double>();
  const auto& rows = j.at("vertices");
  if (!rows.is_array() || rows.empty()) {
    throw ParameterError("vertex polygon: 'vertices' must be a non-empty array");
  }
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd y(n, d);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw ParameterError("vertex polygon: each vertex needs exactly d coordinates");
    }
    for (int c = 0; c < d; ++c) y(i, c) = row.at(c).get<double>();
  }
  return VertexPolygon(d, l, std::move(y));
}

AnglePolygon angle_polygon_from_json(const json& j) {
  require_fields(j, {"l", "beta"}, "angle polygon");
  const double l = j.at("l").get<double>();
  const double phi = j.value("phi", 0.0);
  std::vector<double> beta = j.at("beta").get<std::vector<double>>();
  return AnglePolygon(l, phi, std::move(beta));
}

VertexPolygon polygon_from_json(const json& j, int d_hint) {
  if (j.is_object() && j.contains("vertices")) return vertex_polygon_from_json(j);
  if (j.is_object() && j.contains("beta")) {
    return angles_to_vertices(angle_polygon_from_json(j), d_hint);
  }
  throw ParameterError("polygon: need either a 'vertices' or a 'beta' field");
}

json to_json(const SpectralResult& r) {
  return json{{"kappa1", r.kappa1},
              {"eps1", r.eps1},
              {"eigvec", vector_to_json(r.eigvec)},
              {"residual", r.residual},
              {"bracket_width", r.bracket_width}};
}

json to_json(const ExistenceReport& r) {
  return json{{"exists", r.exists}, {"alpha_crit", finite_or_sentinel(r.alpha_crit)}};
}

json to_json(const DiagonalReport& r) {
  return json{{"m", r.m},
              {"count", r.count},
              {"total", r.total},
              {"mean", r.mean},
              {"regular_reference", r.regular_reference},
              {"gap", r.gap}};
}

json to_json(const SweepResult& r) {
  json rows = json::array();
  for (const SweepRow& row : r.violating_rows) {
    rows.push_back(json{{"N", row.N},
                        {"m", row.m},
                        {"r", row.r},
                        {"value", row.value},
                        {"cheb_holds", row.cheb_holds}});
  }
  return json{{"n_max", r.n_max},
              {"checked", r.checked},
              {"violations", r.violations},
              {"max_required_value", r.max_required_value},
              {"max_r1_abs", r.max_r1_abs},
              {"chebyshev_consistent", r.chebyshev_consistent},
              {"violating_rows", std::move(rows)}};
}

json to_json(const StationarityReport& r) {
  return json{{"N", r.N},
              {"m", r.m},
              {"d", r.d},
              {"multiplier", r.multiplier},
              {"grad_norm", r.grad_norm},
              {"restricted_eigenvalues", vector_to_json(r.restricted_eigenvalues)},
              {"nonnegative_count", r.nonnegative_count},
              {"max_restricted_eigenvalue", r.max_restricted_eigenvalue},
              {"max_mode_value", r.max_mode_value},
              {"sweep_holds", r.sweep_holds}};
}

json to_json(const LocalMaxReport& r) {
  return json{{"reference_value", r.reference_value},
              {"comparisons", r.comparisons},
              {"violations", r.violations},
              {"min_gap", r.min_gap},
              {"max_quad_coeff", r.max_quad_coeff},
              {"mean_quad_coeff", r.mean_quad_coeff},
              {"max_rel_coeff_change", r.max_rel_coeff_change},
              {"all_decreased", r.all_decreased},
              {"coefficients_stable", r.coefficients_stable}};
}

json to_json(const P2Report& r) {
  return json{{"N", r.N},
              {"d", r.d},
              {"samples", r.samples},
              {"bound_violations", r.bound_violations},
              {"chart_disagreements", r.chart_disagreements},
              {"max_m2", r.max_m2},
              {"bound", r.bound},
              {"max_chart_error", r.max_chart_error},
              {"min_margin", r.min_margin},
              {"asserted", r.asserted}};
}

json to_json(const ConsistencyReport& r) {
  return json{{"N", r.N},
              {"d", r.d},
              {"alpha", r.alpha},
              {"samples", r.samples},
              {"both_hold", r.both_hold},
              {"discrepancies", r.discrepancies},
              {"neither_holds", r.neither_holds},
              {"min_green_gap", r.min_green_gap},
              {"min_eps_gap", r.min_eps_gap}};
}

json to_json(const SearchOutcome& r) {
  return json{{"objective", r.objective},
              {"N", r.N},
              {"d", r.d},
              {"m", r.m},
              {"alpha", r.alpha},
              {"l", r.edge_length},
              {"best_value", r.best_value},
              {"best_polygon", json{{"d", r.d}, {"l", r.edge_length},
                                    {"vertices", matrix_to_json(r.best_y)}}},
              {"best_seed", r.best_seed},
              {"reference_value", r.reference_value},
              {"gap", r.gap},
              {"iterations", r.iterations},
              {"evaluations", r.evaluations},
              {"seed", r.seed},
              {"restarts", r.restarts},
              {"converged_chains", r.converged_chains},
              {"budget_exhausted", r.budget_exhausted},
              {"verdict", r.verdict}};
}

json make_meta(std::uint64_t seed, int threads, ExecMode mode) {
  return json{{"version", POLYSPEC_VERSION},
              {"seed", seed},
              {"threads", threads},
              {"mode", mode_name(mode)},
              {"openmp", openmp_available()},
              {"tolerances",
               json{{"geometry", kGeomTol},
                    {"spectral_residual", 1e-11},
                    {"closure_projection", 1e-12},
                    {"candidate_relative", 1e-8}}}};
}

json error_json(const std::string& kind, const std::string& message, const json& extra) {
  json err{{"kind", kind}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) err[it.key()] = it.value();
  return json{{"error", std::move(err)}};
}

std::string mode_name(ExecMode mode) {
  return mode == ExecMode::openmp ? "openmp" : "serial";
}

ExecMode mode_from_name(const std::string& name) {
  if (name == "serial") return ExecMode::serial;
  if (name == "openmp") return ExecMode::openmp;
  throw ParameterError("unknown execution mode '" + name + "' (use serial or openmp)");
}

}  // namespace polyspec
