#include "polyspec/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "polyspec/errors.hpp"
#include "polyspec/rng.hpp"
#include "polyspec/spectral.hpp"

namespace polyspec {

namespace {

Eigen::VectorXd flatten(const Eigen::MatrixXd& g) {
  // Vertex-major stacking (i*d + c), consistent with tangent_basis.
  const int n = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  Eigen::VectorXd v(n * d);
  for (int i = 0; i < n; ++i) v.segment(i * d, d) = g.row(i).transpose();
  return v;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int n, int d) {
  Eigen::MatrixXd g(n, d);
  for (int i = 0; i < n; ++i) g.row(i) = v.segment(i * d, d).transpose();
  return g;
}

// Euclidean gradient of the total m-diagonal length, one term per diagonal
// (m = N/2 diagonals are counted once, like in diagonal_sum).  The search
// space includes exactly degenerate polygons (folded quadrilaterals have two
// coincident vertices), where the length is non-smooth; a zero-length
// diagonal contributes the zero subgradient so the ascent can proceed on the
// remaining terms.
Eigen::MatrixXd diagonal_gradient(const Eigen::MatrixXd& y, int m) {
  const int n = static_cast<int>(y.rows());
  const int count = diagonal_count(n, m);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, y.cols());
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  for (int j = 0; j < count; ++j) {
    const int k = (j + m) % n;
    Eigen::RowVectorXd e = y.row(j) - y.row(k);
    const double norm = e.norm();
    if (norm < 1e-12 * scale) continue;
    e /= norm;
    grad.row(j) += e;
    grad.row(k) -= e;
  }
  return grad;
}

// Projects an ambient gradient onto the tangent space of the equal-edge
// constraints (rigid motions are left in; the objectives are invariant).
Eigen::MatrixXd project_to_constraint_tangent(const VertexPolygon& p, const Eigen::MatrixXd& g) {
  const int n = p.size();
  const int d = p.d;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n * d);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    Eigen::RowVectorXd e = p.y.row(i) - p.y.row(j);
    e /= e.norm();
    jac.block(i, i * d, 1, d) = e;
    jac.block(i, j * d, 1, d) = -e;
  }
  const Eigen::VectorXd gv = flatten(g);
  Eigen::MatrixXd gram = jac * jac.transpose();
  gram.diagonal().array() += 1e-14;
  const Eigen::VectorXd mu = gram.ldlt().solve(jac * gv);
  return unflatten(gv - jac.transpose() * mu, n, d);
}

// Tangent gradient for eps1 by central finite differences over an
// orthonormal tangent basis (analytic eigenvalue derivatives are avoided
// on purpose; the solves are cheap at these sizes).
Eigen::MatrixXd eps1_tangent_gradient(const SearchConfig& cfg, const VertexPolygon& p,
                                      long long& evaluations) {
  const Eigen::MatrixXd basis = tangent_basis(p);
  const double h = 1e-6 * cfg.edge_length;
  Eigen::VectorXd coeffs(basis.cols());
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Eigen::MatrixXd dir = unflatten(basis.col(c), p.size(), p.d);
    const VertexPolygon plus = retract_to_equilateral(p.y + h * dir, cfg.edge_length);
    const VertexPolygon minus = retract_to_equilateral(p.y - h * dir, cfg.edge_length);
    coeffs(c) =
        (ground_state(plus, cfg.alpha).eps1 - ground_state(minus, cfg.alpha).eps1) / (2.0 * h);
    evaluations += 2;
  }
  return unflatten(basis * coeffs, p.size(), p.d);
}

Eigen::MatrixXd objective_tangent_gradient(const SearchConfig& cfg, const VertexPolygon& p,
                                           long long& evaluations) {
  switch (cfg.objective) {
    case ObjectiveKind::Dm:
      return project_to_constraint_tangent(p, diagonal_gradient(p.y, cfg.m));
    case ObjectiveKind::M2:
      return project_to_constraint_tangent(
          p, diagonal_gradient(p.y, 2) / diagonal_count(p.size(), 2));
    case ObjectiveKind::eps1:
      return eps1_tangent_gradient(cfg, p, evaluations);
  }
  throw ParameterError("unknown objective");
}

int effective_m(const SearchConfig& cfg) { return cfg.objective == ObjectiveKind::Dm ? cfg.m : 2; }

void validate_config(const SearchConfig& cfg) {
  if (cfg.N < 3) throw ParameterError("search: N must be >= 3");
  if (cfg.d != 2 && cfg.d != 3) throw ParameterError("search: d must be 2 or 3");
  if (!(cfg.edge_length > 0.0)) throw ParameterError("search: edge length must be positive");
  if (cfg.restarts < 1) throw ParameterError("search: restarts must be >= 1");
  if (cfg.max_iterations < 1) throw ParameterError("search: iteration budget must be >= 1");
  const int m = effective_m(cfg);
  if (m < 2 || 2 * m > cfg.N) throw ParameterError("search: m out of range for N");
}

}  // namespace

std::string objective_name(ObjectiveKind kind, int m) {
  switch (kind) {
    case ObjectiveKind::Dm:
      return "D" + std::to_string(m);
    case ObjectiveKind::M2:
      return "M2";
    case ObjectiveKind::eps1:
      return "eps1";
  }
  throw ParameterError("unknown objective");
}

double evaluate_objective(const SearchConfig& cfg, const VertexPolygon& p) {
  switch (cfg.objective) {
    case ObjectiveKind::Dm:
      return diagonal_sum(p, cfg.m).total;
    case ObjectiveKind::M2:
      return diagonal_sum(p, 2).mean;
    case ObjectiveKind::eps1:
      return ground_state(p, cfg.alpha).eps1;
  }
  throw ParameterError("unknown objective");
}

ChainResult run_chain(const SearchConfig& cfg, int chain, std::uint64_t chain_seed,
                      const std::function<void(const TraceRow&)>& trace) {
  validate_config(cfg);
  const double l = cfg.edge_length;
  ChainResult res;
  res.chain = chain;
  res.seed = chain_seed;

  VertexPolygon p = random_equilateral(cfg.N, cfg.d, l, chain_seed);
  double value = 0.0;
  try {
    value = evaluate_objective(cfg, p);
    res.evaluations += 1;
  } catch (const Error&) {
    // The start is a degenerate polygon on which the objective is not
    // evaluable (coincident interaction sites, or no bound state for this
    // sample).  The chain reports -inf and lets other restarts win.
    res.value = -std::numeric_limits<double>::infinity();
    res.y = p.y;
    return res;
  }
  Rng rng(derive_seed(chain_seed, 1));  // stream 0 is used by the start sampler

  // Projected-gradient ascent with an adaptive step and strict-improvement
  // acceptance.  The step collapsing below representable progress counts as
  // convergence: near a smooth maximum the value plateaus at rounding level
  // long before the gradient norm does.
  const auto ascend = [&](bool& converged) {
    double step = 0.1 * l;
    Eigen::MatrixXd grad;
    double gnorm = 0.0;
    const auto refresh_gradient = [&]() -> bool {
      try {
        grad = objective_tangent_gradient(cfg, p, res.evaluations);
        gnorm = grad.norm();
        return true;
      } catch (const Error&) {
        return false;  // non-smooth or non-evaluable neighborhood: stop here
      }
    };
    converged = false;
    if (!refresh_gradient()) return;
    while (res.iterations < cfg.max_iterations) {
      res.iterations += 1;
      if (gnorm <= cfg.gtol) {
        converged = true;
        break;
      }
      bool accepted = false;
      const Eigen::MatrixXd trial_y = p.y + (step / gnorm) * grad;
      try {
        const VertexPolygon trial = retract_to_equilateral(trial_y, l);
        const double trial_value = evaluate_objective(cfg, trial);
        res.evaluations += 1;
        if (trial_value > value) {
          p = trial;
          value = trial_value;
          accepted = true;
        }
      } catch (const Error&) {
        // Failed retraction or a degenerate trial point: treat as a
        // rejected step and shrink.
      }
      if (accepted) {
        step = std::min(step * 1.5, 2.0 * l);
        if (!refresh_gradient()) return;
        if (trace) trace({chain, res.iterations, value});
      } else {
        step *= 0.5;
        if (step < 1e-14 * l) {
          converged = true;
          break;
        }
      }
    }
  };

  bool converged = false;
  ascend(converged);

  if (cfg.annealing.enabled) {
    // Metropolis escape phase with geometric cooling, then a polishing
    // ascent from the best configuration visited.
    double temp = cfg.annealing.t0 * l;
    Eigen::MatrixXd best_y = p.y;
    double best_value = value;
    for (int epoch = 0; epoch < cfg.annealing.epochs; ++epoch) {
      for (int s = 0; s < cfg.annealing.steps_per_epoch; ++s) {
        Eigen::MatrixXd dir(cfg.N, cfg.d);
        for (int i = 0; i < cfg.N; ++i)
          for (int c = 0; c < cfg.d; ++c) dir(i, c) = rng.gaussian();
        dir = project_to_constraint_tangent(p, dir);
        const double norm = dir.norm();
        if (norm < 1e-12) continue;
        const double amp = cfg.annealing.step_scale * l * rng.uniform();
        try {
          const VertexPolygon trial = retract_to_equilateral(p.y + (amp / norm) * dir, l);
          const double trial_value = evaluate_objective(cfg, trial);
          res.evaluations += 1;
          const double gain = trial_value - value;
          if (gain > 0.0 || rng.uniform() < std::exp(gain / temp)) {
            p = trial;
            value = trial_value;
            if (value > best_value) {
              best_value = value;
              best_y = p.y;
            }
          }
        } catch (const Error&) {
          // Rejected proposal.
        }
      }
      temp *= cfg.annealing.cooling;
    }
    if (best_value > value) {
      try {
        VertexPolygon best_p = retract_to_equilateral(best_y, l);
        const double v = evaluate_objective(cfg, best_p);
        res.evaluations += 1;
        p = std::move(best_p);
        value = v;
      } catch (const Error&) {
        // Keep the current (slightly worse) endpoint if the recorded best
        // cannot be re-established.
      }
    }
    bool polished = false;
    ascend(polished);
    converged = converged || polished;
  }

  res.value = value;
  res.y = p.y;
  res.converged = converged;
  if (trace) trace({chain, res.iterations, value});
  return res;
}

std::string classify_outcome(double best_value, double reference_value) {
  const double margin = 1e-8 * std::abs(reference_value);
  return best_value - reference_value > margin ? "counterexample-candidate"
                                               : "regular-optimal-so-far";
}

double reverify_value(const SearchConfig& cfg, const Eigen::MatrixXd& y) {
  const VertexPolygon p = retract_to_equilateral(y, cfg.edge_length, 1e-13);
  return evaluate_objective(cfg, p);
}

SearchOutcome maximize_objective(const SearchConfig& cfg, ExecMode mode,
                                 const std::function<void(const TraceRow&)>& trace) {
  validate_config(cfg);
  SearchOutcome out;
  out.objective = objective_name(cfg.objective, cfg.m);
  out.N = cfg.N;
  out.d = cfg.d;
  out.m = effective_m(cfg);
  out.alpha = cfg.alpha;
  out.edge_length = cfg.edge_length;
  out.seed = cfg.seed;
  out.restarts = cfg.restarts;

  const VertexPolygon regular = regular_polygon(cfg.N, cfg.edge_length, cfg.d);
  out.reference_value = evaluate_objective(cfg, regular);

  struct Slot {
    ChainResult result;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(cfg.restarts);
  // A trace callback imposes deterministic row order, so run serially then.
  for_each_index(static_cast<std::size_t>(cfg.restarts), trace ? ExecMode::serial : mode,
                 [&](std::size_t chain) {
                   try {
                     slots[chain].result =
                         run_chain(cfg, static_cast<int>(chain), derive_seed(cfg.seed, chain),
                                   trace);
                   } catch (...) {
                     slots[chain].error = std::current_exception();
                   }
                 });

  // Order-independent merge: max by value, smaller sub-seed breaks ties.
  const ChainResult* best = nullptr;
  for (const Slot& slot : slots) {
    if (slot.error) std::rethrow_exception(slot.error);
    const ChainResult& r = slot.result;
    out.iterations += r.iterations;
    out.evaluations += r.evaluations;
    if (r.converged) out.converged_chains += 1;
    if (!best || r.value > best->value ||
        (r.value == best->value && r.seed < best->seed)) {
      best = &slot.result;
    }
  }
  if (best->value == -std::numeric_limits<double>::infinity()) {
    throw NumericalError("maximize_objective: no chain produced an evaluable polygon");
  }
  out.best_value = best->value;
  out.best_y = best->y;
  out.best_seed = best->seed;
  out.budget_exhausted = out.converged_chains == 0;

  out.verdict = classify_outcome(out.best_value, out.reference_value);
  if (out.verdict == "counterexample-candidate") {
    // Conservative path: a fresh evaluation at tightened retraction
    // tolerance must uphold the excess before the verdict is emitted.
    out.best_value = reverify_value(cfg, out.best_y);
    out.verdict = classify_outcome(out.best_value, out.reference_value);
  }
  out.gap = out.reference_value - out.best_value;
  return out;
}

P2Report verify_p2_global(int N, int d, long long samples, std::uint64_t seed, double edge_length,
                          ExecMode mode) {
  if (N < 4) throw ParameterError("verify_p2_global: N must be >= 4");
  if (d != 2 && d != 3) throw ParameterError("verify_p2_global: d must be 2 or 3");
  if (samples < 1) throw ParameterError("verify_p2_global: samples must be >= 1");

  P2Report report;
  report.N = N;
  report.d = d;
  report.samples = samples;
  report.bound = 2.0 * edge_length * std::cos(std::numbers::pi / N);
  report.asserted = d == 2;
  report.min_margin = std::numeric_limits<double>::infinity();

  struct Slot {
    double m2 = 0.0;
    double chart_error = 0.0;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(samples));

  for_each_index(static_cast<std::size_t>(samples), mode, [&](std::size_t i) {
    Slot& slot = slots[i];
    try {
      const VertexPolygon p = random_equilateral(N, d, edge_length, derive_seed(seed, i));
      slot.m2 = diagonal_sum(p, 2).mean;
      if (d == 2) {
        const AnglePolygon a = vertices_to_angles(p);
        slot.chart_error = std::abs(mean_second_diagonal_from_angles(a) - slot.m2);
      }
    } catch (...) {
      slot.error = std::current_exception();
    }
  });

  for (const Slot& slot : slots) {
    if (slot.error) std::rethrow_exception(slot.error);
    if (slot.m2 > report.bound + 1e-9) report.bound_violations += 1;
    if (d == 2 && slot.chart_error > 1e-9) report.chart_disagreements += 1;
    report.max_m2 = std::max(report.max_m2, slot.m2);
    report.max_chart_error = std::max(report.max_chart_error, slot.chart_error);
    report.min_margin = std::min(report.min_margin, report.bound - slot.m2);
  }
  return report;
}

ConsistencyReport spectral_vs_diag_consistency(int N, int d, double alpha, long long samples,
                                               std::uint64_t seed, double edge_length,
                                               ExecMode mode) {
  if (N < 3) throw ParameterError("spectral_vs_diag_consistency: N must be >= 3");
  if (samples < 1) throw ParameterError("spectral_vs_diag_consistency: samples must be >= 1");

  ConsistencyReport report;
  report.N = N;
  report.d = d;
  report.alpha = alpha;
  report.samples = samples;
  report.min_green_gap = std::numeric_limits<double>::infinity();
  report.min_eps_gap = std::numeric_limits<double>::infinity();

  const VertexPolygon regular = regular_polygon(N, edge_length, d);
  const SpectralResult ref = ground_state(regular, alpha);
  const double ref_green = green_sum(regular, ref.kappa1);
  const Eigen::MatrixXd basis = tangent_basis(regular);

  struct Slot {
    double green_gap = 0.0;
    double eps_gap = 0.0;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(samples));

  for_each_index(static_cast<std::size_t>(samples), mode, [&](std::size_t i) {
    Slot& slot = slots[i];
    try {
      Rng rng(derive_seed(seed, i));
      Eigen::VectorXd coeff(basis.cols());
      for (Eigen::Index c = 0; c < coeff.size(); ++c) coeff(c) = rng.gaussian();
      Eigen::VectorXd dir = basis * coeff;
      dir /= dir.norm();
      const double amp = 0.1 * edge_length * rng.uniform();
      const Eigen::MatrixXd step = unflatten(amp * dir, N, d);
      const VertexPolygon p = retract_to_equilateral(regular.y + step, edge_length);
      slot.green_gap = green_sum(p, ref.kappa1) - ref_green;
      slot.eps_gap = ref.eps1 - ground_state(p, alpha).eps1;
    } catch (...) {
      slot.error = std::current_exception();
    }
  });

  for (const Slot& slot : slots) {
    if (slot.error) std::rethrow_exception(slot.error);
    const bool green_holds = slot.green_gap > 0.0;
    const bool eps_holds = slot.eps_gap > 0.0;
    if (green_holds && eps_holds) {
      report.both_hold += 1;
    } else if (green_holds != eps_holds) {
      report.discrepancies += 1;
    } else {
      report.neither_holds += 1;
    }
    report.min_green_gap = std::min(report.min_green_gap, slot.green_gap);
    report.min_eps_gap = std::min(report.min_eps_gap, slot.eps_gap);
  }
  return report;
}

}  // namespace polyspec
