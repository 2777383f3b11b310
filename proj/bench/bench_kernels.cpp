// Timing harness for the batch kernels: every kernel runs once in serial
// mode (the reference implementation) and once under OpenMP, the outputs are
// compared bitwise, and the wall-clock ratio is reported.  On a single
// hardware thread the ratio hovers around 1; the point of the table is the
// identical-results column and the per-kernel baseline cost.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "polyspec/geometry.hpp"
#include "polyspec/json_io.hpp"
#include "polyspec/parallel.hpp"
#include "polyspec/search.hpp"
#include "polyspec/spectral.hpp"
#include "polyspec/stationarity.hpp"

using namespace polyspec;

namespace {

double time_once(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Row {
  std::string name;
  double serial_s = 0.0;
  double openmp_s = 0.0;
  bool identical = false;
};

}  // namespace

int main() {
  std::printf("openmp available: %s, max threads: %d\n\n",
              openmp_available() ? "yes" : "no", max_threads());

  std::vector<Row> rows;

  {
    Row row{"inequality_sweep(150)", 0, 0, false};
    SweepResult a, b;
    row.serial_s = time_once([&] { a = inequality_sweep(150, ExecMode::serial); });
    row.openmp_s = time_once([&] { b = inequality_sweep(150, ExecMode::openmp); });
    row.identical = to_json(a).dump() == to_json(b).dump() &&
                    a.max_required_value == b.max_required_value;
    rows.push_back(row);
  }

  {
    Row row{"lambda_min_grid(N=12, 2000 points)", 0, 0, false};
    const VertexPolygon p = random_equilateral(12, 3, 1.0, 2718);
    const std::vector<double> kappas = geometric_grid(1e-3, 1e3, 2000);
    std::vector<double> a, b;
    row.serial_s = time_once([&] { a = lambda_min_grid(p.y, 3, -1.0, kappas, ExecMode::serial); });
    row.openmp_s = time_once([&] { b = lambda_min_grid(p.y, 3, -1.0, kappas, ExecMode::openmp); });
    row.identical = a == b;
    rows.push_back(row);
  }

  {
    Row row{"verify_p2_global(N=10, 2e4 samples)", 0, 0, false};
    P2Report a, b;
    row.serial_s = time_once([&] { a = verify_p2_global(10, 2, 20000, 31, 1.0, ExecMode::serial); });
    row.openmp_s = time_once([&] { b = verify_p2_global(10, 2, 20000, 31, 1.0, ExecMode::openmp); });
    row.identical = to_json(a).dump() == to_json(b).dump();
    rows.push_back(row);
  }

  {
    Row row{"local_max_verify(N=8, m=4, 200 trials)", 0, 0, false};
    LocalMaxConfig cfg;
    cfg.N = 8;
    cfg.d = 3;
    cfg.m = 4;
    cfg.trials = 200;
    cfg.seed = 99;
    LocalMaxReport a, b;
    row.serial_s = time_once([&] { a = local_max_verify(cfg, ExecMode::serial); });
    row.openmp_s = time_once([&] { b = local_max_verify(cfg, ExecMode::openmp); });
    row.identical = to_json(a).dump() == to_json(b).dump();
    rows.push_back(row);
  }

  {
    Row row{"maximize_objective(N=9, D3, 64 restarts)", 0, 0, false};
    SearchConfig cfg;
    cfg.N = 9;
    cfg.d = 3;
    cfg.objective = ObjectiveKind::Dm;
    cfg.m = 3;
    cfg.restarts = 64;
    cfg.seed = 4;
    SearchOutcome a, b;
    row.serial_s = time_once([&] { a = maximize_objective(cfg, ExecMode::serial); });
    row.openmp_s = time_once([&] { b = maximize_objective(cfg, ExecMode::openmp); });
    row.identical = to_json(a).dump() == to_json(b).dump();
    rows.push_back(row);
  }

  std::printf("%-42s %10s %10s %8s %10s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
              "identical");
  bool all_identical = true;
  for (const Row& r : rows) {
    all_identical = all_identical && r.identical;
    std::printf("%-42s %10.4f %10.4f %8.2f %10s\n", r.name.c_str(), r.serial_s, r.openmp_s,
                r.openmp_s > 0 ? r.serial_s / r.openmp_s : 0.0, r.identical ? "yes" : "NO");
  }
  std::printf("\n%s\n", all_identical ? "all kernels bitwise identical across modes"
                                      : "MODE MISMATCH DETECTED");
  return all_identical ? 0 : 1;
}
