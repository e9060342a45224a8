#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qarch/search.hpp"

namespace qarch {

/// r = <C_max> / C_classical (Eq. of merit for a discovered circuit).
inline double approximation_ratio(double energy, double classical) {
  if (!(classical > 0.0))
    throw std::invalid_argument("approximation_ratio: classical optimum must be positive");
  return energy / classical;
}

enum class MixerTag { Baseline, Searched };

inline const char* mixer_tag_name(MixerTag tag) {
  return tag == MixerTag::Baseline ? "baseline" : "searched";
}

struct EvalRecord {
  int graph_id = 0;
  int depth = 1;
  MixerTag tag = MixerTag::Searched;
  GateCombination combination;
  double energy = 0.0;
  double classical = 0.0;
  double ratio = 0.0;
};

struct RatioAggregate {
  MixerTag tag = MixerTag::Searched;
  int depth = 0;  // 0 = aggregated over all evaluated depths
  double mean_ratio = 0.0;
};

struct PairedDelta {
  int depth = 0;  // 0 = aggregated over all evaluated depths
  double mean_ratio_delta = 0.0;  // searched minus baseline
};

struct EvaluationReport {
  std::vector<EvalRecord> records;       // ordered by (tag, graph, depth)
  std::vector<RatioAggregate> aggregates;
  std::vector<PairedDelta> deltas;       // filled by compare_mixers
};

struct EvaluationConfig {
  std::vector<int> depths = {1, 2, 3};
  OptimizerConfig optimizer;
  std::uint64_t base_seed = 0;
  int workers = 1;
  int bruteforce_cap = 24;
};

namespace detail {

// One mixer over the whole dataset. Optimizer seeds derive from the
// (graph, depth) cell only, so two mixers evaluated with the same config see
// pairwise identical seeds.
inline std::vector<EvalRecord> evaluate_records(const GateCombination& mixer, MixerTag tag,
                                                const std::vector<Graph>& dataset,
                                                const std::vector<double>& classical,
                                                const EvaluationConfig& cfg) {
  const std::size_t n_depths = cfg.depths.size();
  std::vector<EvalRecord> records(dataset.size() * n_depths);
  parallel_for_indexed(records.size(), cfg.workers, [&](std::size_t cell) {
    const std::size_t graph_id = cell / n_depths;
    const std::size_t depth_slot = cell % n_depths;
    const Graph& g = dataset[graph_id];
    const int depth = cfg.depths[depth_slot];

    OptimizerConfig opt = cfg.optimizer;
    opt.rng_seed = rng::derive_seed(cfg.base_seed, static_cast<std::uint64_t>(cell));
    QaoaAnsatz ansatz = build_qaoa(g, build_mixer(g, mixer), depth);
    OptimizationRecord rec = optimize_ansatz(ansatz, g, opt);

    EvalRecord& out = records[cell];
    out.graph_id = static_cast<int>(graph_id);
    out.depth = depth;
    out.tag = tag;
    out.combination = mixer;
    out.energy = rec.best_value;
    out.classical = classical[graph_id];
    out.ratio = approximation_ratio(rec.best_value, classical[graph_id]);
  });
  return records;
}

inline std::vector<double> classical_optima(const std::vector<Graph>& dataset, int cap) {
  std::vector<double> out;
  out.reserve(dataset.size());
  for (const Graph& g : dataset) out.push_back(maxcut_bruteforce(g, cap).value);
  return out;
}

inline void append_aggregates(EvaluationReport& report, MixerTag tag,
                              const std::vector<int>& depths) {
  std::map<int, std::pair<double, int>> by_depth;  // depth -> (sum, count)
  double total = 0.0;
  int count = 0;
  for (const EvalRecord& r : report.records) {
    if (r.tag != tag) continue;
    auto& slot = by_depth[r.depth];
    slot.first += r.ratio;
    ++slot.second;
    total += r.ratio;
    ++count;
  }
  for (int depth : depths) {
    const auto& slot = by_depth.at(depth);
    report.aggregates.push_back({tag, depth, slot.first / slot.second});
  }
  report.aggregates.push_back({tag, 0, total / count});
}

}  // namespace detail

/// Optimizes the given mixer on every (graph, depth) cell and reports the
/// approximation ratio against the exhaustive classical optimum.
inline EvaluationReport evaluate_mixer(const GateCombination& mixer,
                                       const std::vector<Graph>& dataset,
                                       const EvaluationConfig& cfg,
                                       MixerTag tag = MixerTag::Searched) {
  if (dataset.empty()) throw std::invalid_argument("evaluate_mixer: empty dataset");
  if (cfg.depths.empty()) throw std::invalid_argument("evaluate_mixer: no depths given");
  const auto classical = detail::classical_optima(dataset, cfg.bruteforce_cap);
  EvaluationReport report;
  report.records = detail::evaluate_records(mixer, tag, dataset, classical, cfg);
  detail::append_aggregates(report, tag, cfg.depths);
  return report;
}

/// Paired comparison: both mixers run with identical per-cell optimizer
/// seeds, so their ratio deltas reflect the mixers and not optimizer luck.
inline EvaluationReport compare_mixers(const GateCombination& searched,
                                       const GateCombination& baseline,
                                       const std::vector<Graph>& dataset,
                                       const EvaluationConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("compare_mixers: empty dataset");
  if (cfg.depths.empty()) throw std::invalid_argument("compare_mixers: no depths given");
  const auto classical = detail::classical_optima(dataset, cfg.bruteforce_cap);

  EvaluationReport report;
  report.records = detail::evaluate_records(searched, MixerTag::Searched, dataset, classical, cfg);
  auto baseline_records =
      detail::evaluate_records(baseline, MixerTag::Baseline, dataset, classical, cfg);
  report.records.insert(report.records.end(),
                        std::make_move_iterator(baseline_records.begin()),
                        std::make_move_iterator(baseline_records.end()));

  detail::append_aggregates(report, MixerTag::Searched, cfg.depths);
  detail::append_aggregates(report, MixerTag::Baseline, cfg.depths);

  // Paired deltas per depth and overall: mean over graphs of (searched - baseline).
  std::map<int, std::pair<double, int>> by_depth;
  const std::size_t half = dataset.size() * cfg.depths.size();
  double total = 0.0;
  for (std::size_t cell = 0; cell < half; ++cell) {
    const double delta = report.records[cell].ratio - report.records[half + cell].ratio;
    auto& slot = by_depth[report.records[cell].depth];
    slot.first += delta;
    ++slot.second;
    total += delta;
  }
  for (int depth : cfg.depths) {
    const auto& slot = by_depth.at(depth);
    report.deltas.push_back({depth, slot.first / slot.second});
  }
  report.deltas.push_back({0, total / static_cast<double>(half)});
  return report;
}

}  // namespace qarch
