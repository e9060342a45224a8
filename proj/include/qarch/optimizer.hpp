#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qarch/rng.hpp"
#include "qarch/simulator.hpp"

namespace qarch {

struct MinimizeOptions {
  int max_evals = 200;       // objective evaluation budget
  double rho_begin = 0.5;    // initial trust-region radius (radians here)
  double rho_end = 1e-4;     // final trust-region radius
};

struct MinimizeResult {
  std::vector<double> best_x;
  double best_f = 0.0;
  int evaluations = 0;
  std::vector<double> trace;  // running best f after each evaluation
};

namespace detail {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// Returns false when a pivot degenerates (simplex lost rank).
inline bool solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[static_cast<std::size_t>(row) * n + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * n + col]))
        pivot = row;
    }
    const double head = a[static_cast<std::size_t>(pivot) * n + col];
    if (std::abs(head) < 1e-14) return false;
    if (pivot != col) {
      for (int j = col; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(pivot) * n + j],
                  a[static_cast<std::size_t>(col) * n + j]);
      std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
    }
    for (int row = col + 1; row < n; ++row) {
      const double f = a[static_cast<std::size_t>(row) * n + col] /
                       a[static_cast<std::size_t>(col) * n + col];
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j)
        a[static_cast<std::size_t>(row) * n + j] -= f * a[static_cast<std::size_t>(col) * n + j];
      b[static_cast<std::size_t>(row)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double sum = b[static_cast<std::size_t>(row)];
    for (int j = row + 1; j < n; ++j)
      sum -= a[static_cast<std::size_t>(row) * n + j] * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(row)] = sum / a[static_cast<std::size_t>(row) * n + row];
  }
  return true;
}

}  // namespace detail

/// Derivative-free minimizer in the COBYLA family: a linear model is
/// interpolated through a simplex of n+1 points and minimized over a trust
/// region whose radius shrinks from rho_begin to rho_end. Fully deterministic:
/// the path depends only on x0 and the observed objective values.
inline MinimizeResult minimize(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> x0, const MinimizeOptions& options = {}) {
  if (options.max_evals < 1) throw std::invalid_argument("minimize: max_evals must be >= 1");
  if (x0.empty()) throw std::invalid_argument("minimize: empty start point");

  const int dim = static_cast<int>(x0.size());
  MinimizeResult result;
  result.best_x = x0;

  auto evaluate = [&](const std::vector<double>& x) {
    const double f = objective(x);
    ++result.evaluations;
    if (result.evaluations == 1 || f < result.best_f) {
      result.best_f = f;
      result.best_x = x;
    }
    result.trace.push_back(result.best_f);
    return f;
  };
  auto budget_left = [&] { return result.evaluations < options.max_evals; };

  // Simplex vertices and their values; vertex 0 tracks the incumbent.
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(dim) + 1, x0);
  std::vector<double> fs(static_cast<std::size_t>(dim) + 1, 0.0);

  double rho = options.rho_begin;
  fs[0] = evaluate(xs[0]);
  for (int j = 0; j < dim && budget_left(); ++j) {
    xs[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(j)] += rho;
    fs[static_cast<std::size_t>(j) + 1] = evaluate(xs[static_cast<std::size_t>(j) + 1]);
  }
  if (!budget_left()) return result;

  // Rebuild a fresh axis-aligned simplex around the incumbent.
  auto reset_simplex = [&] {
    for (int j = 0; j < dim && budget_left(); ++j) {
      xs[static_cast<std::size_t>(j) + 1] = xs[0];
      xs[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(j)] += rho;
      fs[static_cast<std::size_t>(j) + 1] = evaluate(xs[static_cast<std::size_t>(j) + 1]);
    }
  };

  std::vector<double> matrix(static_cast<std::size_t>(dim) * dim);
  std::vector<double> grad(static_cast<std::size_t>(dim));
  bool fresh_simplex = true;

  while (budget_left() && rho >= options.rho_end) {
    // Keep the best vertex at slot 0.
    std::size_t best = 0;
    for (std::size_t j = 1; j < xs.size(); ++j) {
      if (fs[j] < fs[best]) best = j;
    }
    if (best != 0) {
      std::swap(xs[0], xs[best]);
      std::swap(fs[0], fs[best]);
    }

    // Linear model through the simplex: rows are vertex offsets.
    for (int row = 0; row < dim; ++row) {
      for (int col = 0; col < dim; ++col) {
        matrix[static_cast<std::size_t>(row) * dim + col] =
            xs[static_cast<std::size_t>(row) + 1][static_cast<std::size_t>(col)] -
            xs[0][static_cast<std::size_t>(col)];
      }
      grad[static_cast<std::size_t>(row)] = fs[static_cast<std::size_t>(row) + 1] - fs[0];
    }
    if (!detail::solve_linear(matrix, grad, dim)) {
      reset_simplex();
      fresh_simplex = true;
      continue;
    }

    double grad_norm = 0.0;
    for (double gi : grad) grad_norm += gi * gi;
    grad_norm = std::sqrt(grad_norm);

    if (!(grad_norm > 1e-12 * (1.0 + std::abs(fs[0])))) {
      // Flat model at this scale: either the simplex is stale or we are done
      // at the current radius.
      if (fresh_simplex) {
        rho *= 0.5;
      }
      reset_simplex();
      fresh_simplex = true;
      continue;
    }

    std::vector<double> trial = xs[0];
    for (int j = 0; j < dim; ++j)
      trial[static_cast<std::size_t>(j)] -= rho / grad_norm * grad[static_cast<std::size_t>(j)];
    if (!budget_left()) break;
    const double f_trial = evaluate(trial);

    const double predicted = rho * grad_norm;
    const double actual = fs[0] - f_trial;

    // The trial point replaces the worst vertex when it beats it.
    std::size_t worst = 0;
    for (std::size_t j = 1; j < xs.size(); ++j) {
      if (fs[j] > fs[worst]) worst = j;
    }
    if (f_trial < fs[worst]) {
      xs[worst] = std::move(trial);
      fs[worst] = f_trial;
      fresh_simplex = false;
    }

    if (actual < 0.1 * predicted) {
      // Poor step: fix geometry first, then shrink.
      double spread = 0.0;
      std::size_t far = 1;
      for (std::size_t j = 1; j < xs.size(); ++j) {
        double d2 = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double d = xs[j][static_cast<std::size_t>(c)] - xs[0][static_cast<std::size_t>(c)];
          d2 += d * d;
        }
        if (d2 > spread) {
          spread = d2;
          far = j;
        }
      }
      spread = std::sqrt(spread);
      if (spread > 2.0 * rho) {
        if (!budget_left()) break;
        const double scale = rho / spread;
        for (int c = 0; c < dim; ++c) {
          xs[far][static_cast<std::size_t>(c)] =
              xs[0][static_cast<std::size_t>(c)] +
              scale * (xs[far][static_cast<std::size_t>(c)] - xs[0][static_cast<std::size_t>(c)]);
        }
        fs[far] = evaluate(xs[far]);
        fresh_simplex = false;
      } else {
        rho *= 0.5;
        reset_simplex();
        fresh_simplex = true;
      }
    } else {
      fresh_simplex = false;
    }
  }
  return result;
}

struct OptimizerConfig {
  int max_evals = 200;        // objective evaluation budget ("steps")
  double initial_fill = 0.1;  // default start: every parameter at this value (rad)
  std::optional<std::vector<double>> initial_params;
  std::uint64_t rng_seed = 0;
  int restarts = 0;           // extra seeded uniform starts sharing the budget
  double rho_begin = 0.5;
  double rho_end = 1e-4;
};

struct TracePoint {
  int evaluation = 0;
  double value = 0.0;  // running best <C>
};

struct OptimizationRecord {
  std::vector<double> best_params;
  double best_value = 0.0;  // best expected cut
  int evaluations = 0;
  std::vector<TracePoint> trace;
};

/// Maximizes expectation_cut(simulate_ansatz(ansatz, params), g) by running
/// the trust-region minimizer on the negated objective. Deterministic given
/// the config; the RNG is touched only when restarts are enabled.
inline OptimizationRecord optimize_ansatz(const QaoaAnsatz& ansatz, const Graph& g,
                                          const OptimizerConfig& cfg) {
  if (cfg.max_evals < 1) throw std::invalid_argument("optimize_ansatz: max_evals must be >= 1");
  if (g.n_nodes() != ansatz.graph.n_nodes())
    throw std::invalid_argument("optimize_ansatz: ansatz/graph dimension mismatch");

  const int n_params = ansatz.parameter_count();
  AnsatzSimulator circuit(ansatz);
  const bool same_graph = (g == ansatz.graph);
  std::optional<CostDiagonal> objective_cost;
  if (!same_graph) objective_cost.emplace(g);

  std::function<double(std::span<const double>)> negated =
      [&](std::span<const double> params) {
        if (same_graph) return -circuit.expected_cut(params);
        circuit.run(params);
        return -objective_cost->expectation(circuit.state());
      };

  std::vector<double> start(static_cast<std::size_t>(n_params), cfg.initial_fill);
  if (cfg.initial_params) {
    if (static_cast<int>(cfg.initial_params->size()) != n_params)
      throw std::invalid_argument("optimize_ansatz: initial_params length mismatch");
    start = *cfg.initial_params;
  }

  const int n_starts = 1 + std::max(0, cfg.restarts);
  std::mt19937_64 gen(cfg.rng_seed);

  OptimizationRecord record;
  MinimizeOptions opts{cfg.max_evals / n_starts, cfg.rho_begin, cfg.rho_end};
  opts.max_evals += cfg.max_evals % n_starts;  // first start absorbs the remainder

  for (int run = 0; run < n_starts; ++run) {
    if (run > 0) {
      // gamma in [0, 2pi), beta in [0, pi)
      const int depth = ansatz.depth;
      for (int j = 0; j < depth; ++j)
        start[static_cast<std::size_t>(j)] = rng::canonical(gen) * 2.0 * M_PI;
      for (int j = depth; j < n_params; ++j)
        start[static_cast<std::size_t>(j)] = rng::canonical(gen) * M_PI;
      opts.max_evals = cfg.max_evals / n_starts;
    }
    if (opts.max_evals < 1) break;

    const MinimizeResult r = minimize(negated, start, opts);
    const bool run_improves = record.best_params.empty() || -r.best_f > record.best_value;
    for (double f : r.trace) {
      const double value = -f;
      ++record.evaluations;
      if (record.evaluations == 1 || value > record.best_value) record.best_value = value;
      record.trace.push_back({record.evaluations, record.best_value});
    }
    if (run_improves) record.best_params = r.best_x;
  }
  return record;
}

}  // namespace qarch
