#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "polyspec/errors.hpp"
#include "polyspec/json_io.hpp"
#include "polyspec/rng.hpp"
#include "polyspec/search.hpp"
#include "polyspec/spectral.hpp"
#include "polyspec/stationarity.hpp"

namespace {

using namespace polyspec;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

// Writes to a file, or to stdout when the path is empty or "-".
void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open output file: " + path);
  out << text;
}

void emit_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <class T>
void cfg_get(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

struct GlobalOpts {
  std::string config;
  int threads = 0;
  std::string mode = "serial";
};

VertexPolygon build_polygon(const std::string& input, int N, int d, double l) {
  if (!input.empty()) return polygon_from_json(load_json_file(input), d);
  return regular_polygon(N, l, d);
}

void parse_grid_range(const std::string& text, double& lo, double& hi, int& num) {
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c)) {
    throw ParameterError("grid range must be lo:hi:num");
  }
  try {
    lo = std::stod(a);
    hi = std::stod(b);
    num = std::stoi(c);
  } catch (const std::exception&) {
    throw ParameterError("grid range must be lo:hi:num with numeric fields");
  }
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  std::string input;
  int N = 6;
  int d = 2;
  double l = 1.0;
  double alpha = 0.0;
  std::string grid;
  std::string grid_out = "spectrum_grid.csv";
  std::string out;
};

int run_spectrum(SpectrumOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "input", o.input);
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "alpha", o.alpha);
  cfg_get(cfg, "grid", o.grid);
  cfg_get(cfg, "grid_out", o.grid_out);
  cfg_get(cfg, "out", o.out);

  const VertexPolygon p = build_polygon(o.input, o.N, o.d, o.l);
  json out;
  out["meta"] = make_meta(0, g.threads, mode);
  out["alpha"] = o.alpha;
  out["polygon"] = to_json(p);
  out["existence"] = to_json(existence_check(p, o.alpha));
  out["spectrum"] = to_json(ground_state(p, o.alpha));

  if (!o.grid.empty()) {
    double lo = 0.0, hi = 0.0;
    int num = 0;
    parse_grid_range(o.grid, lo, hi, num);
    const std::vector<double> kappas = geometric_grid(lo, hi, num);
    const std::vector<double> values = lambda_min_grid(p.y, p.d, o.alpha, kappas, mode);
    std::ostringstream csv;
    csv << "# polyspec " << POLYSPEC_VERSION << " lambda_min grid\n";
    csv << "# N=" << p.size() << " d=" << p.d << " alpha=" << fmt(o.alpha)
        << " mode=" << mode_name(mode) << "\n";
    csv << "kappa,lambda_min\n";
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      csv << fmt(kappas[i]) << "," << fmt(values[i]) << "\n";
    }
    write_text(o.grid_out, csv.str());
    out["grid_csv"] = o.grid_out.empty() ? "-" : o.grid_out;
  }
  emit_json(o.out, out);
  return 0;
}

// --------------------------------------------------------------- diagonals

struct DiagonalOpts {
  std::string input;
  int N = 6;
  int d = 2;
  double l = 1.0;
  int m = 2;
  bool all = false;
  std::string out;
};

int run_diagonals(DiagonalOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "input", o.input);
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "m", o.m);
  cfg_get(cfg, "all", o.all);
  cfg_get(cfg, "out", o.out);

  const VertexPolygon p = build_polygon(o.input, o.N, o.d, o.l);
  std::vector<int> ms;
  if (o.all) {
    for (int m = 2; 2 * m <= p.size(); ++m) ms.push_back(m);
  } else {
    ms.push_back(o.m);
  }
  json reports = json::array();
  for (int m : ms) reports.push_back(to_json(diagonal_sum(p, m)));

  json out;
  out["meta"] = make_meta(0, g.threads, mode);
  out["polygon"] = to_json(p);
  out["reports"] = std::move(reports);
  emit_json(o.out, out);
  return 0;
}

// ------------------------------------------------------------------ verify

struct SweepOpts {
  int n_max = 200;
  std::string csv;
  std::string out;
};

int run_verify_sweeps(SweepOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "Nmax", o.n_max);
  cfg_get(cfg, "csv", o.csv);
  cfg_get(cfg, "out", o.out);

  SweepResult res;
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw ParameterError("cannot open output file: " + o.csv);
    f << "# polyspec " << POLYSPEC_VERSION << " mode-inequality sweep, Nmax=" << o.n_max << "\n";
    f << "N,m,r,value,required,holds,cheb_holds\n";
    res = inequality_sweep(o.n_max, mode, [&](const SweepRow& row) {
      f << row.N << "," << row.m << "," << row.r << "," << fmt(row.value) << ","
        << (row.required ? 1 : 0) << "," << (row.holds ? 1 : 0) << ","
        << (row.cheb_holds ? 1 : 0) << "\n";
    });
  } else {
    res = inequality_sweep(o.n_max, mode);
  }
  const bool pass = res.violations == 0 && res.max_r1_abs <= 1e-12 && res.chebyshev_consistent;

  json out;
  out["meta"] = make_meta(0, g.threads, mode);
  out["result"] = to_json(res);
  out["pass"] = pass;
  emit_json(o.out, out);
  return pass ? 0 : 1;
}

struct LocalOpts {
  int N = 6;
  int d = 2;
  int m = 2;
  bool spectral = false;
  double alpha = 0.0;
  double l = 1.0;
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<double> amplitudes;
  std::string csv;
  std::string out;
};

int run_verify_local(LocalOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "m", o.m);
  cfg_get(cfg, "spectral", o.spectral);
  cfg_get(cfg, "alpha", o.alpha);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "trials", o.trials);
  cfg_get(cfg, "seed", o.seed);
  cfg_get(cfg, "amplitudes", o.amplitudes);
  cfg_get(cfg, "csv", o.csv);
  cfg_get(cfg, "out", o.out);

  LocalMaxConfig c;
  c.N = o.N;
  c.d = o.d;
  c.mode = o.spectral ? LocalMaxMode::spectral : LocalMaxMode::geometric;
  c.m = o.m;
  c.alpha = o.alpha;
  c.edge_length = o.l;
  c.trials = o.trials;
  c.seed = o.seed;
  if (!o.amplitudes.empty()) c.amplitudes = o.amplitudes;

  LocalMaxReport rep;
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw ParameterError("cannot open output file: " + o.csv);
    f << "# polyspec " << POLYSPEC_VERSION << " local-maximality samples\n";
    f << "trial,amplitude,value,gap,quad_coeff\n";
    rep = local_max_verify(c, ExecMode::serial, [&](const LocalMaxSample& s) {
      f << s.trial << "," << fmt(s.amplitude) << "," << fmt(s.value) << "," << fmt(s.gap) << ","
        << fmt(s.quad_coeff) << "\n";
    });
  } else {
    rep = local_max_verify(c, mode);
  }
  const bool pass = rep.all_decreased && rep.coefficients_stable && rep.max_quad_coeff < 0.0;

  json out;
  out["meta"] = make_meta(o.seed, g.threads, mode);
  out["config"] = json{{"N", c.N},         {"d", c.d},
                       {"objective", o.spectral ? "eps1" : "D" + std::to_string(c.m)},
                       {"alpha", c.alpha}, {"l", c.edge_length},
                       {"trials", c.trials}, {"amplitudes", c.amplitudes}};
  out["report"] = to_json(rep);
  out["pass"] = pass;
  emit_json(o.out, out);
  return pass ? 0 : 1;
}

struct P2Opts {
  int N = 10;
  int d = 2;
  long long samples = 1000;
  std::uint64_t seed = 1;
  double l = 1.0;
  std::string out;
};

int run_verify_p2(P2Opts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "samples", o.samples);
  cfg_get(cfg, "seed", o.seed);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "out", o.out);

  const P2Report rep = verify_p2_global(o.N, o.d, o.samples, o.seed, o.l, mode);
  const bool pass = !rep.asserted || (rep.bound_violations == 0 && rep.chart_disagreements == 0);

  json out;
  out["meta"] = make_meta(o.seed, g.threads, mode);
  out["report"] = to_json(rep);
  out["pass"] = pass;
  emit_json(o.out, out);
  return pass ? 0 : 1;
}

struct StatOpts {
  int N = 6;
  int m = 0;  // 0 = all m in [2, N/2]
  int d = 2;
  double l = 1.0;
  std::string out;
};

int run_verify_stationarity(StatOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "m", o.m);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "out", o.out);

  std::vector<int> ms;
  if (o.m == 0) {
    for (int m = 2; 2 * m <= o.N; ++m) ms.push_back(m);
  } else {
    if (o.m < 2 || 2 * o.m > o.N) throw ParameterError("verify stationarity: need 2 <= m <= N/2");
    ms.push_back(o.m);
  }

  bool pass = true;
  json rows = json::array();
  for (int m : ms) {
    const StationarityReport rep = analyze_stationarity(o.N, m, o.d, o.l);
    const bool ok =
        rep.grad_norm <= 1e-10 && rep.max_restricted_eigenvalue < 0.0 && rep.sweep_holds;
    pass = pass && ok;
    json row = to_json(rep);
    row["pass"] = ok;
    rows.push_back(std::move(row));
  }

  json out;
  out["meta"] = make_meta(0, g.threads, mode);
  out["reports"] = std::move(rows);
  out["pass"] = pass;
  emit_json(o.out, out);
  return pass ? 0 : 1;
}

// ------------------------------------------------------------------ search

struct SearchOpts {
  std::string objective = "D2";
  int N = 4;
  int d = 2;
  int m = 2;
  double alpha = 0.0;
  double l = 1.0;
  int restarts = 16;
  std::uint64_t seed = 1;
  int budget = 400;
  double gtol = 1e-12;
  bool anneal = false;
  double anneal_t0 = 0.1;
  double anneal_cooling = 0.95;
  int anneal_epochs = 20;
  int anneal_steps = 25;
  double anneal_scale = 0.1;
  std::string trace;
  std::string out;
};

ObjectiveKind parse_objective(const std::string& s, int& m) {
  if (s == "eps1") return ObjectiveKind::eps1;
  if (s == "M2" || s == "m2") return ObjectiveKind::M2;
  if (!s.empty() && (s[0] == 'D' || s[0] == 'd')) {
    const std::string rest = s.substr(1);
    if (rest.empty() || rest == "m") return ObjectiveKind::Dm;  // order taken from --m
    bool digits = true;
    for (char c : rest) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    if (digits) {
      m = std::stoi(rest);
      return ObjectiveKind::Dm;
    }
  }
  throw ParameterError("unknown objective '" + s + "' (use D<m>, M2 or eps1)");
}

int run_search(SearchOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "objective", o.objective);
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "m", o.m);
  cfg_get(cfg, "alpha", o.alpha);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "restarts", o.restarts);
  cfg_get(cfg, "seed", o.seed);
  cfg_get(cfg, "budget", o.budget);
  cfg_get(cfg, "gtol", o.gtol);
  cfg_get(cfg, "anneal", o.anneal);
  cfg_get(cfg, "anneal_t0", o.anneal_t0);
  cfg_get(cfg, "anneal_cooling", o.anneal_cooling);
  cfg_get(cfg, "anneal_epochs", o.anneal_epochs);
  cfg_get(cfg, "anneal_steps", o.anneal_steps);
  cfg_get(cfg, "anneal_scale", o.anneal_scale);
  cfg_get(cfg, "trace", o.trace);
  cfg_get(cfg, "out", o.out);

  SearchConfig c;
  c.N = o.N;
  c.d = o.d;
  c.m = o.m;
  c.objective = parse_objective(o.objective, c.m);
  c.alpha = o.alpha;
  c.edge_length = o.l;
  c.restarts = o.restarts;
  c.seed = o.seed;
  c.max_iterations = o.budget;
  c.gtol = o.gtol;
  c.annealing.enabled = o.anneal;
  c.annealing.t0 = o.anneal_t0;
  c.annealing.cooling = o.anneal_cooling;
  c.annealing.epochs = o.anneal_epochs;
  c.annealing.steps_per_epoch = o.anneal_steps;
  c.annealing.step_scale = o.anneal_scale;

  SearchOutcome outcome;
  if (!o.trace.empty()) {
    std::ofstream f(o.trace);
    if (!f) throw ParameterError("cannot open output file: " + o.trace);
    f << "# polyspec " << POLYSPEC_VERSION << " search trace\n";
    f << "chain,iteration,value\n";
    outcome = maximize_objective(c, mode, [&](const TraceRow& row) {
      f << row.chain << "," << row.iteration << "," << fmt(row.value) << "\n";
    });
  } else {
    outcome = maximize_objective(c, mode);
  }

  json out;
  out["meta"] = make_meta(o.seed, g.threads, mode);
  out["outcome"] = to_json(outcome);
  emit_json(o.out, out);
  return 0;  // findings are data, not failures
}

// ------------------------------------------------------------------ sample

struct SampleOpts {
  int N = 6;
  int d = 2;
  double l = 1.0;
  int count = 1;
  std::uint64_t seed = 1;
  bool angles = false;
  std::string out;
};

int run_sample(SampleOpts o, const GlobalOpts& g, const json& cfg, ExecMode mode) {
  cfg_get(cfg, "N", o.N);
  cfg_get(cfg, "d", o.d);
  cfg_get(cfg, "l", o.l);
  cfg_get(cfg, "count", o.count);
  cfg_get(cfg, "seed", o.seed);
  cfg_get(cfg, "angles", o.angles);
  cfg_get(cfg, "out", o.out);
  if (o.count < 1) throw ParameterError("sample: count must be >= 1");

  json polygons = json::array();
  for (int i = 0; i < o.count; ++i) {
    const VertexPolygon p = random_equilateral(o.N, o.d, o.l, derive_seed(o.seed, i));
    json entry = to_json(p);
    if (o.angles) {
      if (o.d != 2) throw ParameterError("sample: --angles requires d=2");
      entry["angles"] = to_json(vertices_to_angles(p));
    }
    polygons.push_back(std::move(entry));
  }

  json out;
  out["meta"] = make_meta(o.seed, g.threads, mode);
  out["polygons"] = std::move(polygons);
  emit_json(o.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyspec: spectral and diagonal extremality of equilateral polygons"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config, "JSON config file; its keys override command-line flags");
  app.add_option("--threads", g.threads, "max worker threads for openmp mode (0 = hardware)");
  app.add_option("--mode", g.mode, "execution mode: serial | openmp")
      ->check(CLI::IsMember({"serial", "openmp"}));

  SpectrumOpts so;
  auto* spectrum = app.add_subcommand("spectrum", "ground state of the point-interaction array");
  spectrum->add_option("--input", so.input, "polygon JSON file (vertex or angle form)");
  spectrum->add_option("--N", so.N, "regular polygon size (used when --input is absent)");
  spectrum->add_option("--d", so.d, "ambient dimension (2 or 3)");
  spectrum->add_option("--l", so.l, "edge length");
  spectrum->add_option("--alpha", so.alpha, "coupling constant");
  spectrum->add_option("--grid", so.grid, "lambda_min CSV over a kappa grid, format lo:hi:num");
  spectrum->add_option("--grid-out", so.grid_out, "CSV path for --grid");
  spectrum->add_option("--out", so.out, "output JSON path (default stdout)");

  DiagonalOpts dopt;
  auto* diagonals = app.add_subcommand("diagonals", "diagonal sums of one polygon");
  diagonals->add_option("--input", dopt.input, "polygon JSON file (vertex or angle form)");
  diagonals->add_option("--N", dopt.N, "regular polygon size (used when --input is absent)");
  diagonals->add_option("--d", dopt.d, "ambient dimension (2 or 3)");
  diagonals->add_option("--l", dopt.l, "edge length");
  diagonals->add_option("--m", dopt.m, "diagonal order");
  diagonals->add_flag("--all", dopt.all, "report every m in [2, N/2]");
  diagonals->add_option("--out", dopt.out, "output JSON path (default stdout)");

  auto* verify = app.add_subcommand("verify", "run a verification suite (exit 0 iff it passes)");
  verify->require_subcommand(1);

  SweepOpts swo;
  auto* v_sweeps = verify->add_subcommand("sweeps", "mode-inequality sweep over N, m, r");
  v_sweeps->add_option("--Nmax", swo.n_max, "largest polygon size");
  v_sweeps->add_option("--csv", swo.csv, "stream every row to this CSV file");
  v_sweeps->add_option("--out", swo.out, "output JSON path (default stdout)");

  LocalOpts lo;
  auto* v_local = verify->add_subcommand("local", "local maximality at the regular polygon");
  v_local->add_option("--N", lo.N, "polygon size");
  v_local->add_option("--d", lo.d, "ambient dimension (2 or 3)");
  v_local->add_option("--m", lo.m, "diagonal order (geometric objective)");
  v_local->add_flag("--spectral", lo.spectral, "use the ground-state energy as objective");
  v_local->add_option("--alpha", lo.alpha, "coupling constant (spectral objective)");
  v_local->add_option("--l", lo.l, "edge length");
  v_local->add_option("--trials", lo.trials, "random tangent directions");
  v_local->add_option("--seed", lo.seed, "RNG seed");
  v_local->add_option("--amplitudes", lo.amplitudes,
                      "perturbation amplitudes relative to l (default 1e-1 1e-2 1e-3)");
  v_local->add_option("--csv", lo.csv, "stream per-sample rows to this CSV file");
  v_local->add_option("--out", lo.out, "output JSON path (default stdout)");

  P2Opts po;
  auto* v_p2 = verify->add_subcommand("p2", "mean-2-diagonal bound on random polygons");
  v_p2->add_option("--N", po.N, "polygon size");
  v_p2->add_option("--d", po.d, "ambient dimension (2 asserts, 3 records)");
  v_p2->add_option("--samples", po.samples, "number of random polygons");
  v_p2->add_option("--seed", po.seed, "RNG seed");
  v_p2->add_option("--l", po.l, "edge length");
  v_p2->add_option("--out", po.out, "output JSON path (default stdout)");

  StatOpts sto;
  auto* v_stat = verify->add_subcommand("stationarity", "multiplier, gradient and Hessian checks");
  v_stat->add_option("--N", sto.N, "polygon size");
  v_stat->add_option("--m", sto.m, "diagonal order (0 = all m in [2, N/2])");
  v_stat->add_option("--d", sto.d, "ambient dimension (2 or 3)");
  v_stat->add_option("--l", sto.l, "edge length");
  v_stat->add_option("--out", sto.out, "output JSON path (default stdout)");

  SearchOpts seo;
  auto* search = app.add_subcommand("search", "multi-start maximization over the manifold");
  search->add_option("--objective", seo.objective, "D<m> | M2 | eps1");
  search->add_option("--N", seo.N, "polygon size");
  search->add_option("--d", seo.d, "ambient dimension (2 or 3)");
  search->add_option("--m", seo.m, "diagonal order (when --objective is Dm)");
  search->add_option("--alpha", seo.alpha, "coupling constant (eps1 objective)");
  search->add_option("--l", seo.l, "edge length");
  search->add_option("--restarts", seo.restarts, "independent chains");
  search->add_option("--seed", seo.seed, "RNG seed");
  search->add_option("--budget", seo.budget, "ascent iterations per chain");
  search->add_option("--gtol", seo.gtol, "projected-gradient convergence tolerance");
  search->add_flag("--anneal", seo.anneal, "enable the annealing escape phase");
  search->add_option("--anneal-t0", seo.anneal_t0, "initial temperature (objective units per l)");
  search->add_option("--anneal-cooling", seo.anneal_cooling, "geometric cooling per epoch");
  search->add_option("--anneal-epochs", seo.anneal_epochs, "annealing epochs");
  search->add_option("--anneal-steps", seo.anneal_steps, "proposals per epoch");
  search->add_option("--anneal-scale", seo.anneal_scale, "proposal amplitude relative to l");
  search->add_option("--trace", seo.trace, "per-chain objective trace CSV");
  search->add_option("--out", seo.out, "output JSON path (default stdout)");

  SampleOpts sao;
  auto* sample = app.add_subcommand("sample", "random closed equilateral polygons");
  sample->add_option("--N", sao.N, "polygon size");
  sample->add_option("--d", sao.d, "ambient dimension (2 or 3)");
  sample->add_option("--l", sao.l, "edge length");
  sample->add_option("--count", sao.count, "number of polygons");
  sample->add_option("--seed", sao.seed, "RNG seed");
  sample->add_flag("--angles", sao.angles, "include the bending-angle chart (d=2)");
  sample->add_option("--out", sao.out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly; everything else is usage
  }

  try {
    json cfg = json::object();
    if (!g.config.empty()) {
      cfg = load_json_file(g.config);
      if (!cfg.is_object()) throw ParameterError("config file must hold a JSON object");
      cfg_get(cfg, "threads", g.threads);
      cfg_get(cfg, "mode", g.mode);
    }
    const ExecMode mode = mode_from_name(g.mode);
    if (g.threads > 0) set_max_threads(g.threads);

    if (app.got_subcommand(spectrum)) return run_spectrum(so, g, cfg, mode);
    if (app.got_subcommand(diagonals)) return run_diagonals(dopt, g, cfg, mode);
    if (app.got_subcommand(verify)) {
      if (verify->got_subcommand(v_sweeps)) return run_verify_sweeps(swo, g, cfg, mode);
      if (verify->got_subcommand(v_local)) return run_verify_local(lo, g, cfg, mode);
      if (verify->got_subcommand(v_p2)) return run_verify_p2(po, g, cfg, mode);
      if (verify->got_subcommand(v_stat)) return run_verify_stationarity(sto, g, cfg, mode);
    }
    if (app.got_subcommand(search)) return run_search(seo, g, cfg, mode);
    if (app.got_subcommand(sample)) return run_sample(sao, g, cfg, mode);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const NoDiscreteSpectrumError& e) {
    emit_json("", error_json("no-discrete-spectrum", e.what(), {{"alpha_crit", e.alpha_crit}}));
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ParameterError& e) {
    emit_json("", error_json("parameter", e.what()));
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    emit_json("", error_json("geometry", e.what()));
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    emit_json("", error_json("numerical", e.what()));
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    emit_json("", error_json("parameter", e.what()));
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    emit_json("", error_json("internal", e.what()));
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
