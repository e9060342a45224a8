#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qarch/evaluator.hpp"
#include "qarch/graph.hpp"
#include "qarch/search.hpp"

namespace qarch {

inline constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::json;

// ---- graphs ----------------------------------------------------------------

inline json graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.n_nodes();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.u, e.v}));
  j["edges"] = std::move(edges);
  if (!g.unit_weights()) {
    json weights = json::array();
    for (const Edge& e : g.edges()) weights.push_back(e.weight);
    j["weights"] = std::move(weights);
  }
  return j;
}

inline Graph graph_from_json(const json& j) {
  Graph g(j.at("n").get<int>());
  const json& edges = j.at("edges");
  const bool weighted = j.contains("weights");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double w = weighted ? j.at("weights").at(i).get<double>() : 1.0;
    g.add_edge(edges[i].at(0).get<int>(), edges[i].at(1).get<int>(), w);
  }
  return g;
}

struct Dataset {
  std::uint64_t seed = 0;
  std::vector<Graph> graphs;
};

inline json dataset_to_json(const Dataset& d) {
  json j;
  j["seed"] = d.seed;
  json graphs = json::array();
  for (const Graph& g : d.graphs) graphs.push_back(graph_to_json(g));
  j["graphs"] = std::move(graphs);
  return j;
}

inline Dataset dataset_from_json(const json& j) {
  Dataset d;
  d.seed = j.at("seed").get<std::uint64_t>();
  for (const json& g : j.at("graphs")) d.graphs.push_back(graph_from_json(g));
  return d;
}

// ---- circuits / search -----------------------------------------------------

inline json combination_to_json(const GateCombination& comb) {
  json j = json::array();
  for (GateKind kind : comb) j.push_back(gate_name(kind));
  return j;
}

inline GateCombination combination_from_json(const json& j) {
  GateCombination comb;
  for (const json& name : j) comb.push_back(gate_from_name(name.get<std::string>()));
  return comb;
}

inline json mixer_layer_to_json(const MixerLayer& layer) {
  json j;
  j["combination"] = combination_to_json(layer.combination);
  j["shared_beta"] = true;
  return j;
}

inline json search_result_to_json(const SearchResult& r) {
  json j;
  j["best"] = {{"combination", combination_to_json(r.best_mixer)},
               {"p", r.best_depth},
               {"energy", r.best_energy},
               {"index", r.best_index}};
  json candidates = json::array();
  for (const CandidateResult& c : r.candidates) {
    candidates.push_back({{"index", c.index},
                          {"p", c.depth},
                          {"combination", combination_to_json(c.combination)},
                          {"energy", c.energy},
                          {"params", c.record.best_params},
                          {"evaluations", c.record.evaluations},
                          {"wall_time_s", c.wall_time_s}});
  }
  j["candidates"] = std::move(candidates);
  j["timing"] = {{"total_s", r.total_seconds}, {"per_depth_s", r.per_depth_seconds}};
  return j;
}

inline json dataset_search_result_to_json(const DatasetSearchResult& r) {
  json j;
  j["mode"] = "aggregate";
  const AggregateCandidate* best = nullptr;
  json candidates = json::array();
  for (const AggregateCandidate& c : r.candidates) {
    if (c.index == r.best_index) best = &c;
    candidates.push_back({{"index", c.index},
                          {"p", c.depth},
                          {"combination", combination_to_json(c.combination)},
                          {"mean_energy", c.mean_energy},
                          {"mean_rank", c.mean_rank}});
  }
  j["candidates"] = std::move(candidates);
  if (best) {
    j["best"] = {{"combination", combination_to_json(best->combination)},
                 {"p", best->depth},
                 {"index", best->index},
                 {"mean_energy", best->mean_energy},
                 {"mean_rank", best->mean_rank}};
  }
  json per_graph = json::array();
  for (std::size_t i = 0; i < r.per_graph.size(); ++i) {
    const SearchResult& s = r.per_graph[i];
    per_graph.push_back({{"graph_id", i},
                         {"best", {{"combination", combination_to_json(s.best_mixer)},
                                   {"p", s.best_depth},
                                   {"energy", s.best_energy},
                                   {"index", s.best_index}}},
                         {"timing", {{"total_s", s.total_seconds},
                                     {"per_depth_s", s.per_depth_seconds}}}});
  }
  j["per_graph"] = std::move(per_graph);
  return j;
}

// ---- evaluation ------------------------------------------------------------

inline json evaluation_report_to_json(const EvaluationReport& report) {
  json j;
  json records = json::array();
  for (const EvalRecord& r : report.records) {
    records.push_back({{"graph_id", r.graph_id},
                       {"p", r.depth},
                       {"mixer", mixer_tag_name(r.tag)},
                       {"combination", combination_to_json(r.combination)},
                       {"energy", r.energy},
                       {"classical", r.classical},
                       {"ratio", r.ratio}});
  }
  j["records"] = std::move(records);
  json aggregates = json::array();
  for (const RatioAggregate& a : report.aggregates) {
    aggregates.push_back({{"mixer", mixer_tag_name(a.tag)},
                          {"p", a.depth},
                          {"mean_ratio", a.mean_ratio}});
  }
  j["aggregates"] = std::move(aggregates);
  if (!report.deltas.empty()) {
    json deltas = json::array();
    for (const PairedDelta& d : report.deltas) {
      deltas.push_back({{"p", d.depth}, {"mean_ratio_delta", d.mean_ratio_delta}});
    }
    j["deltas"] = std::move(deltas);
  }
  return j;
}

/// Flat CSV with one row per record: graph_id,p,mixer,energy,classical,ratio
inline std::string evaluation_report_to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "graph_id,p,mixer,energy,classical,ratio\n";
  for (const EvalRecord& r : report.records) {
    out << r.graph_id << ',' << r.depth << ',' << mixer_tag_name(r.tag) << ','
        << json(r.energy).dump() << ',' << json(r.classical).dump() << ','
        << json(r.ratio).dump() << '\n';
  }
  return out.str();
}

// ---- bench -----------------------------------------------------------------

struct BenchRecord {
  std::string mode;  // "serial" or "parallel"
  int workers = 1;
  int p = 1;
  int graph_id = 0;
  int rep = 0;
  double wall_time_s = 0.0;
};

inline std::string bench_records_to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "mode,workers,p,graph_id,rep,wall_time_s\n";
  for (const BenchRecord& r : records) {
    out << r.mode << ',' << r.workers << ',' << r.p << ',' << r.graph_id << ','
        << r.rep << ',' << json(r.wall_time_s).dump() << '\n';
  }
  return out.str();
}

// ---- run manifest ----------------------------------------------------------

/// Every command embeds its manifest in the files it writes; re-running the
/// recorded argv reproduces all non-timing bytes.
struct RunManifest {
  std::vector<std::string> argv;  // subcommand and flags, without the binary
  json config;
  std::string version = kToolVersion;
  std::string started_at;
  std::string finished_at;
};

inline std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json manifest_to_json(const RunManifest& m) {
  return {{"argv", m.argv},
          {"config", m.config},
          {"version", m.version},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at}};
}

// ---- helpers ---------------------------------------------------------------

/// Removes wall-clock data (timing blocks, per-candidate wall times, manifest
/// timestamps) so outputs can be compared across runs and worker counts.
inline void strip_timing(json& j) {
  if (j.is_object()) {
    j.erase("timing");
    j.erase("wall_time_s");
    j.erase("started_at");
    j.erase("finished_at");
    for (auto& [key, value] : j.items()) strip_timing(value);
  } else if (j.is_array()) {
    for (json& item : j) strip_timing(item);
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline json read_json_file(const std::string& path) {
  return json::parse(read_text_file(path));
}

/// Canonical on-disk form: 2-space indent plus trailing newline.
inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace qarch
