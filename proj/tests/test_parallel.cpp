#include "doctest.h"

#include <atomic>
#include <vector>

#include "polyspec/geometry.hpp"
#include "polyspec/json_io.hpp"
#include "polyspec/parallel.hpp"
#include "polyspec/search.hpp"
#include "polyspec/spectral.hpp"
#include "polyspec/stationarity.hpp"

using namespace polyspec;

// The parallel mode must be a drop-in replacement for the serial reference:
// identical results bit for bit, because every kernel writes per-index slots
// and aggregates serially.  On a single-core runner the OpenMP path still
// exercises the slot/aggregation machinery with one worker.

TEST_CASE("for_each_index covers every index exactly once in both modes") {
  for (ExecMode mode : {ExecMode::serial, ExecMode::openmp}) {
    std::vector<std::atomic<int>> hits(257);
    for (auto& h : hits) h.store(0);
    for_each_index(hits.size(), mode, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("thread cap") {
  set_max_threads(2);
  CHECK(max_threads() >= 1);
  CHECK(max_threads() <= 2);
  set_max_threads(0);
  CHECK(max_threads() >= 1);
  if (!openmp_available()) CHECK(max_threads() == 1);
}

TEST_CASE("lambda_min grid agrees across modes") {
  const VertexPolygon p = random_equilateral(6, 3, 1.0, 4242);
  const std::vector<double> kappas = geometric_grid(1e-2, 1e2, 200);
  const auto serial = lambda_min_grid(p.y, 3, -1.0, kappas, ExecMode::serial);
  const auto parallel = lambda_min_grid(p.y, 3, -1.0, kappas, ExecMode::openmp);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("inequality sweep agrees across modes") {
  const SweepResult a = inequality_sweep(60, ExecMode::serial);
  const SweepResult b = inequality_sweep(60, ExecMode::openmp);
  CHECK(a.checked == b.checked);
  CHECK(a.violations == b.violations);
  CHECK(a.max_required_value == b.max_required_value);
  CHECK(a.max_r1_abs == b.max_r1_abs);
  CHECK(a.chebyshev_consistent == b.chebyshev_consistent);
}

TEST_CASE("local-maximality verification agrees across modes") {
  LocalMaxConfig cfg;
  cfg.N = 6;
  cfg.d = 3;
  cfg.mode = LocalMaxMode::geometric;
  cfg.m = 3;
  cfg.trials = 12;
  cfg.seed = 909;
  const LocalMaxReport a = local_max_verify(cfg, ExecMode::serial);
  const LocalMaxReport b = local_max_verify(cfg, ExecMode::openmp);
  CHECK(a.reference_value == b.reference_value);
  CHECK(a.comparisons == b.comparisons);
  CHECK(a.violations == b.violations);
  CHECK(a.min_gap == b.min_gap);
  CHECK(a.max_quad_coeff == b.max_quad_coeff);
  CHECK(a.mean_quad_coeff == b.mean_quad_coeff);
  CHECK(a.max_rel_coeff_change == b.max_rel_coeff_change);
}

TEST_CASE("bound verification agrees across modes") {
  const P2Report a = verify_p2_global(7, 2, 400, 55, 1.0, ExecMode::serial);
  const P2Report b = verify_p2_global(7, 2, 400, 55, 1.0, ExecMode::openmp);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("consistency probe agrees across modes") {
  const ConsistencyReport a = spectral_vs_diag_consistency(5, 2, 0.0, 20, 77, 1.0,
                                                           ExecMode::serial);
  const ConsistencyReport b = spectral_vs_diag_consistency(5, 2, 0.0, 20, 77, 1.0,
                                                           ExecMode::openmp);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("search outcome agrees across modes") {
  SearchConfig cfg;
  cfg.N = 5;
  cfg.d = 2;
  cfg.objective = ObjectiveKind::Dm;
  cfg.m = 2;
  cfg.restarts = 6;
  cfg.seed = 13;
  const SearchOutcome a = maximize_objective(cfg, ExecMode::serial);
  const SearchOutcome b = maximize_objective(cfg, ExecMode::openmp);
  CHECK(to_json(a).dump() == to_json(b).dump());
}
