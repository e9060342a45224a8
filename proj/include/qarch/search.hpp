#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qarch/circuits.hpp"
#include "qarch/optimizer.hpp"

namespace qarch {

enum class EnumerationMode {
  CumulativeK,  // k = 1..k_max per depth
  FixedK,       // k = k_max only per depth
};

struct SearchConfig {
  int p_max = 4;
  int k_max = 4;
  std::vector<GateKind> alphabet = default_alphabet();
  int workers = 1;  // 1 = serial
  OptimizerConfig optimizer;
  std::uint64_t base_seed = 0;
  EnumerationMode mode = EnumerationMode::CumulativeK;
};

struct CandidateResult {
  int index = 0;  // global candidate index within the search
  int depth = 1;
  GateCombination combination;
  double energy = 0.0;  // best expected cut found by the optimizer
  OptimizationRecord record;
  double wall_time_s = 0.0;
};

struct SearchResult {
  GateCombination best_mixer;
  double best_energy = 0.0;
  int best_depth = 1;
  int best_index = 0;
  std::vector<CandidateResult> candidates;
  double total_seconds = 0.0;
  std::vector<double> per_depth_seconds;  // per_depth_seconds[p-1]
};

/// Candidate sequences for one depth under the given enumeration mode.
inline std::vector<GateCombination> enumerate_candidates(
    const std::vector<GateKind>& alphabet, int k_max, EnumerationMode mode) {
  if (k_max < 1) throw std::invalid_argument("enumerate_candidates: k_max must be >= 1");
  if (mode == EnumerationMode::FixedK) return gate_combinations(alphabet, k_max);
  std::vector<GateCombination> out;
  for (int k = 1; k <= k_max; ++k) {
    auto combos = gate_combinations(alphabet, k);
    out.insert(out.end(), std::make_move_iterator(combos.begin()),
               std::make_move_iterator(combos.end()));
  }
  return out;
}

/// Evaluates tasks 0..count-1 with at most `workers` threads. Results land in
/// a slot per index, so output order never depends on completion order. The
/// first failing task aborts the whole map (remaining work is dropped) and is
/// reported by index.
template <typename Fn>
void parallel_for_indexed(std::size_t count, int workers, Fn&& body) {
  if (workers < 1) throw std::invalid_argument("parallel executor needs at least 1 worker");
  if (count == 0) return;

  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
        throw std::runtime_error("candidate " + std::to_string(i) + " failed: " + e.what());
      }
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = 0;

  auto worker_loop = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error || i < error_index) {
          error = std::current_exception();
          error_index = i;
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(workers)));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker_loop);
  for (auto& th : pool) th.join();

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      throw std::runtime_error("candidate " + std::to_string(error_index) +
                               " failed: " + e.what());
    }
  }
}

struct PendingCandidate {
  int index = 0;
  int depth = 1;
  GateCombination combination;
};

/// Maps the evaluation function over all candidates with a worker pool.
inline std::vector<CandidateResult> parallel_map_candidates(
    const std::vector<PendingCandidate>& candidates,
    const std::function<CandidateResult(const PendingCandidate&)>& evaluate, int workers) {
  std::vector<CandidateResult> results(candidates.size());
  parallel_for_indexed(candidates.size(), workers,
                       [&](std::size_t i) { results[i] = evaluate(candidates[i]); });
  return results;
}

/// Best of `candidates` against an optional incumbent. Among candidates, the
/// maximal energy wins, ties resolved by (lower depth, lower index); the
/// incumbent is retained unless a candidate is strictly better.
inline CandidateResult select_best(const std::vector<CandidateResult>& candidates,
                                   const std::optional<CandidateResult>& incumbent = {}) {
  if (candidates.empty() && !incumbent)
    throw std::invalid_argument("select_best: no candidates and no incumbent");

  const CandidateResult* best = nullptr;
  for (const CandidateResult& c : candidates) {
    if (!best || c.energy > best->energy ||
        (c.energy == best->energy &&
         std::pair(c.depth, c.index) < std::pair(best->depth, best->index))) {
      best = &c;
    }
  }
  if (!best) return *incumbent;
  if (incumbent && incumbent->energy >= best->energy) return *incumbent;
  return *best;
}

/// Runs the full mixer search: for each depth 1..p_max, enumerate candidate
/// combinations, optimize each one, and keep the best performer seen so far.
/// Per-candidate optimizer seeds derive from (base_seed, candidate index), so
/// the result is identical for every worker count.
inline SearchResult search_mixer(const Graph& g, const SearchConfig& cfg) {
  if (cfg.p_max < 1) throw std::invalid_argument("search_mixer: p_max must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto search_start = clock::now();

  SearchResult result;
  std::optional<CandidateResult> incumbent;
  int next_index = 0;

  for (int p = 1; p <= cfg.p_max; ++p) {
    const auto depth_start = clock::now();
    std::vector<GateCombination> combos =
        enumerate_candidates(cfg.alphabet, cfg.k_max, cfg.mode);

    std::vector<PendingCandidate> pending;
    pending.reserve(combos.size());
    for (auto& comb : combos) {
      pending.push_back({next_index++, p, std::move(comb)});
    }

    auto evaluate = [&](const PendingCandidate& task) {
      const auto t0 = clock::now();
      QaoaAnsatz ansatz = build_qaoa(g, build_mixer(g, task.combination), task.depth);
      OptimizerConfig opt = cfg.optimizer;
      opt.rng_seed = rng::derive_seed(cfg.base_seed, static_cast<std::uint64_t>(task.index));
      CandidateResult out;
      out.index = task.index;
      out.depth = task.depth;
      out.combination = task.combination;
      out.record = optimize_ansatz(ansatz, g, opt);
      out.energy = out.record.best_value;
      out.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
      return out;
    };

    std::vector<CandidateResult> depth_results =
        parallel_map_candidates(pending, evaluate, cfg.workers);

    incumbent = select_best(depth_results, incumbent);
    result.candidates.insert(result.candidates.end(),
                             std::make_move_iterator(depth_results.begin()),
                             std::make_move_iterator(depth_results.end()));
    result.per_depth_seconds.push_back(
        std::chrono::duration<double>(clock::now() - depth_start).count());
  }

  result.best_mixer = incumbent->combination;
  result.best_energy = incumbent->energy;
  result.best_depth = incumbent->depth;
  result.best_index = incumbent->index;
  result.total_seconds = std::chrono::duration<double>(clock::now() - search_start).count();
  return result;
}

struct AggregateCandidate {
  int index = 0;
  int depth = 1;
  GateCombination combination;
  double mean_energy = 0.0;
  double mean_rank = 0.0;  // 0 = best within a graph
};

struct DatasetSearchResult {
  std::vector<SearchResult> per_graph;
  std::vector<AggregateCandidate> candidates;
  int best_index = 0;
};

/// Dataset-level search: one search per graph, then candidates are scored by
/// their mean energy rank across graphs (rank 0 = best in a graph). Lower
/// mean rank wins, ties by lower candidate index.
inline DatasetSearchResult search_mixer_dataset(const std::vector<Graph>& dataset,
                                                const SearchConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("search_mixer_dataset: empty dataset");

  DatasetSearchResult out;
  for (const Graph& g : dataset) out.per_graph.push_back(search_mixer(g, cfg));

  const std::size_t n_candidates = out.per_graph.front().candidates.size();
  out.candidates.resize(n_candidates);
  for (std::size_t c = 0; c < n_candidates; ++c) {
    const CandidateResult& proto = out.per_graph.front().candidates[c];
    out.candidates[c].index = proto.index;
    out.candidates[c].depth = proto.depth;
    out.candidates[c].combination = proto.combination;
  }

  std::vector<std::size_t> order(n_candidates);
  for (const SearchResult& result : out.per_graph) {
    for (std::size_t c = 0; c < n_candidates; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const CandidateResult& x = result.candidates[a];
      const CandidateResult& y = result.candidates[b];
      if (x.energy != y.energy) return x.energy > y.energy;
      return std::pair(x.depth, x.index) < std::pair(y.depth, y.index);
    });
    for (std::size_t rank = 0; rank < n_candidates; ++rank) {
      out.candidates[order[rank]].mean_rank += static_cast<double>(rank);
      out.candidates[order[rank]].mean_energy += result.candidates[order[rank]].energy;
    }
  }
  const double n_graphs = static_cast<double>(dataset.size());
  for (AggregateCandidate& c : out.candidates) {
    c.mean_rank /= n_graphs;
    c.mean_energy /= n_graphs;
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < n_candidates; ++c) {
    if (out.candidates[c].mean_rank < out.candidates[best].mean_rank) best = c;
  }
  out.best_index = out.candidates[best].index;
  return out;
}

}  // namespace qarch
