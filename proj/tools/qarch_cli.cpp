// qarch: dataset generation, mixer search, evaluation, and the
// serial-vs-parallel benchmark harness. All randomness flows from --seed;
// every output references a manifest sufficient to re-run the command.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qarch/qarch.hpp"

namespace fs = std::filesystem;
using qarch::json;

namespace {

struct SweepList {
  std::vector<int> values;
};

// Accepts "a..b", "a..b:step", or a comma list "a,b,c".
SweepList parse_sweep(const std::string& text) {
  SweepList out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int start = std::stoi(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    int step = 1;
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = std::stoi(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const int stop = std::stoi(rest);
    if (step < 1 || stop < start) throw std::invalid_argument("bad sweep: " + text);
    for (int v = start; v <= stop; v += step) out.values.push_back(v);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.values.push_back(std::stoi(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.values.empty()) throw std::invalid_argument("empty sweep: " + text);
  return out;
}

qarch::RunManifest make_manifest(int argc, char** argv, json config) {
  qarch::RunManifest m;
  for (int i = 1; i < argc; ++i) m.argv.emplace_back(argv[i]);
  m.config = std::move(config);
  m.started_at = qarch::iso8601_utc_now();
  return m;
}

void write_manifest(qarch::RunManifest& m, const std::string& path) {
  m.finished_at = qarch::iso8601_utc_now();
  qarch::write_json_file(path, qarch::manifest_to_json(m));
}

int resolve_workers(int requested) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (requested > static_cast<int>(hw)) {
    std::cerr << "warning: " << requested << " workers oversubscribe " << hw
              << " hardware threads\n";
  }
  return requested;
}

qarch::Dataset load_dataset(const std::string& path) {
  return qarch::dataset_from_json(qarch::read_json_file(path));
}

// ---- gen-graphs ------------------------------------------------------------

struct GenArgs {
  int count = 20;
  int nodes = 10;
  std::string kind = "er";
  std::vector<double> edge_probs;
  int degree = 4;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_graphs(const GenArgs& a, int argc, char** argv) {
  std::vector<double> probs = a.edge_probs;
  if (probs.empty()) probs = {0.3, 0.5, 0.7};

  qarch::Dataset dataset;
  dataset.seed = a.seed;
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t graph_seed = qarch::rng::derive_seed(a.seed, static_cast<std::uint64_t>(i));
    if (a.kind == "er") {
      dataset.graphs.push_back(
          qarch::erdos_renyi(a.nodes, probs[static_cast<std::size_t>(i) % probs.size()], graph_seed));
    } else if (a.kind == "regular") {
      dataset.graphs.push_back(qarch::random_regular(a.nodes, a.degree, graph_seed));
    } else {
      throw std::invalid_argument("unknown graph kind: " + a.kind);
    }
  }

  json config = {{"count", a.count},   {"nodes", a.nodes}, {"kind", a.kind},
                 {"edge_probs", probs}, {"degree", a.degree}, {"seed", a.seed},
                 {"out", a.out}};
  qarch::RunManifest manifest = make_manifest(argc, argv, std::move(config));

  const std::string manifest_path = a.out + ".manifest.json";
  json out = qarch::dataset_to_json(dataset);
  out["manifest"] = fs::path(manifest_path).filename().string();
  qarch::write_json_file(a.out, out);
  write_manifest(manifest, manifest_path);
  std::cout << "wrote " << dataset.graphs.size() << " graphs to " << a.out << "\n";
  return 0;
}

// ---- search ----------------------------------------------------------------

struct SearchArgs {
  std::string dataset;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  int p_max = 4;
  int k_max = 4;
  bool fixed_k = false;
  std::string alphabet = "RX,RY,RZ,RXX,RYY";
  int max_iters = 200;
  int restarts = 0;
  bool aggregate = false;
};

qarch::SearchConfig to_search_config(const SearchArgs& a) {
  qarch::SearchConfig cfg;
  cfg.p_max = a.p_max;
  cfg.k_max = a.k_max;
  cfg.alphabet = qarch::combination_from_name(a.alphabet);
  cfg.workers = resolve_workers(a.workers);
  cfg.base_seed = a.seed;
  cfg.mode = a.fixed_k ? qarch::EnumerationMode::FixedK : qarch::EnumerationMode::CumulativeK;
  cfg.optimizer.max_evals = a.max_iters;
  cfg.optimizer.restarts = a.restarts;
  return cfg;
}

json search_config_json(const SearchArgs& a) {
  return {{"dataset", a.dataset}, {"out", a.out_dir},     {"seed", a.seed},
          {"workers", a.workers}, {"p_max", a.p_max},     {"k_max", a.k_max},
          {"fixed_k", a.fixed_k}, {"alphabet", a.alphabet}, {"max_iters", a.max_iters},
          {"restarts", a.restarts}, {"aggregate", a.aggregate}};
}

std::string graph_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "search_g%03zu.json", index);
  return buf;
}

int run_search(const SearchArgs& a, int argc, char** argv) {
  const qarch::Dataset data = load_dataset(a.dataset);
  const qarch::SearchConfig cfg = to_search_config(a);
  qarch::RunManifest manifest = make_manifest(argc, argv, search_config_json(a));

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);

  if (a.aggregate) {
    const qarch::DatasetSearchResult agg = qarch::search_mixer_dataset(data.graphs, cfg);
    json out = qarch::dataset_search_result_to_json(agg);
    out["manifest"] = "manifest.json";
    qarch::write_json_file((dir / "search_aggregate.json").string(), out);
  } else {
    for (std::size_t i = 0; i < data.graphs.size(); ++i) {
      const qarch::SearchResult result = qarch::search_mixer(data.graphs[i], cfg);
      json out = qarch::search_result_to_json(result);
      out["graph_id"] = i;
      out["manifest"] = "manifest.json";
      qarch::write_json_file((dir / graph_file_name(i)).string(), out);
    }
  }
  write_manifest(manifest, (dir / "manifest.json").string());
  std::cout << "search complete: " << a.out_dir << "\n";
  return 0;
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string dataset;
  std::string out_prefix;
  std::string mixer;
  std::string baseline;
  std::string depths = "1,2,3";
  std::uint64_t seed = 0;
  int workers = 1;
  int max_iters = 200;
};

int run_evaluate(const EvaluateArgs& a, int argc, char** argv) {
  const qarch::Dataset data = load_dataset(a.dataset);

  qarch::EvaluationConfig cfg;
  cfg.depths = parse_sweep(a.depths).values;
  cfg.base_seed = a.seed;
  cfg.workers = resolve_workers(a.workers);
  cfg.optimizer.max_evals = a.max_iters;

  const qarch::GateCombination mixer = qarch::combination_from_name(a.mixer);
  qarch::EvaluationReport report;
  if (a.baseline.empty()) {
    report = qarch::evaluate_mixer(mixer, data.graphs, cfg);
  } else {
    report = qarch::compare_mixers(mixer, qarch::combination_from_name(a.baseline),
                                   data.graphs, cfg);
  }

  json config = {{"dataset", a.dataset}, {"out", a.out_prefix}, {"mixer", a.mixer},
                 {"baseline", a.baseline}, {"depths", a.depths}, {"seed", a.seed},
                 {"workers", a.workers},  {"max_iters", a.max_iters}};
  qarch::RunManifest manifest = make_manifest(argc, argv, std::move(config));

  const std::string manifest_path = a.out_prefix + ".manifest.json";
  json out = qarch::evaluation_report_to_json(report);
  out["manifest"] = fs::path(manifest_path).filename().string();
  qarch::write_json_file(a.out_prefix + ".json", out);
  qarch::write_text_file(a.out_prefix + ".csv", qarch::evaluation_report_to_csv(report));
  write_manifest(manifest, manifest_path);
  std::cout << "wrote " << a.out_prefix << ".json and .csv\n";
  return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string dataset;
  std::string out;
  std::string p_sweep;
  std::string workers_sweep;
  std::string modes = "serial,parallel";
  int reps = 5;
  int p = 2;
  int workers = 0;  // 0 -> hardware concurrency
  int k_max = 4;
  bool fixed_k = false;
  int max_iters = 200;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a, int argc, char** argv) {
  const qarch::Dataset data = load_dataset(a.dataset);
  if (data.graphs.empty()) throw std::invalid_argument("bench: empty dataset");

  const std::vector<int> p_values =
      a.p_sweep.empty() ? std::vector<int>{a.p} : parse_sweep(a.p_sweep).values;
  const int default_workers =
      a.workers > 0 ? a.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::vector<int> worker_values = a.workers_sweep.empty()
                                             ? std::vector<int>{default_workers}
                                             : parse_sweep(a.workers_sweep).values;

  std::vector<std::string> modes;
  {
    std::size_t pos = 0;
    while (pos <= a.modes.size()) {
      auto comma = a.modes.find(',', pos);
      if (comma == std::string::npos) comma = a.modes.size();
      modes.push_back(a.modes.substr(pos, comma - pos));
      pos = comma + 1;
    }
  }

  std::vector<qarch::BenchRecord> records;
  for (const std::string& mode : modes) {
    const std::vector<int> sweep = (mode == "serial") ? std::vector<int>{1} : worker_values;
    if (mode != "serial" && mode != "parallel")
      throw std::invalid_argument("bench: unknown mode " + mode);
    for (int workers : sweep) {
      for (int p : p_values) {
        for (int rep = 0; rep < a.reps; ++rep) {
          const int graph_id = rep % static_cast<int>(data.graphs.size());
          qarch::SearchConfig cfg;
          cfg.p_max = p;
          cfg.k_max = a.k_max;
          cfg.mode = a.fixed_k ? qarch::EnumerationMode::FixedK
                               : qarch::EnumerationMode::CumulativeK;
          cfg.workers = (mode == "serial") ? 1 : resolve_workers(workers);
          cfg.base_seed = a.seed;
          cfg.optimizer.max_evals = a.max_iters;
          const qarch::SearchResult r =
              qarch::search_mixer(data.graphs[static_cast<std::size_t>(graph_id)], cfg);
          records.push_back({mode, cfg.workers, p, graph_id, rep, r.total_seconds});
          std::cerr << mode << " workers=" << cfg.workers << " p=" << p << " rep=" << rep
                    << " t=" << r.total_seconds << "s\n";
        }
      }
    }
  }

  json config = {{"dataset", a.dataset},   {"out", a.out},       {"p_sweep", a.p_sweep},
                 {"workers_sweep", a.workers_sweep}, {"modes", a.modes},
                 {"reps", a.reps},          {"p", a.p},           {"workers", a.workers},
                 {"k_max", a.k_max},        {"fixed_k", a.fixed_k},
                 {"max_iters", a.max_iters}, {"seed", a.seed}};
  qarch::RunManifest manifest = make_manifest(argc, argv, std::move(config));

  qarch::write_text_file(a.out, qarch::bench_records_to_csv(records));
  write_manifest(manifest, a.out + ".manifest.json");
  std::cout << "wrote " << records.size() << " timing records to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA mixer architecture search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qarch::kToolVersion);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-graphs", "Generate a seeded graph dataset");
  gen_cmd->add_option("--count", gen.count, "Number of graphs");
  gen_cmd->add_option("--nodes", gen.nodes, "Nodes per graph");
  gen_cmd->add_option("--kind", gen.kind, "Generator kind: er | regular");
  gen_cmd->add_option("--edge-prob", gen.edge_probs,
                      "ER edge probability; repeat for round-robin (default 0.3 0.5 0.7)");
  gen_cmd->add_option("--degree", gen.degree, "Degree for regular graphs");
  gen_cmd->add_option("--seed", gen.seed, "Base RNG seed");
  gen_cmd->add_option("--out", gen.out, "Output dataset path")->required();

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Run the mixer search on a dataset");
  search_cmd->add_option("--dataset", search.dataset, "Dataset path")->required();
  search_cmd->add_option("--out", search.out_dir, "Output directory")->required();
  search_cmd->add_option("--seed", search.seed, "Base RNG seed");
  search_cmd->add_option("--workers", search.workers, "Worker threads (1 = serial)")
      ->envname("QARCH_WORKERS");
  search_cmd->add_option("--p-max", search.p_max, "Maximum ansatz depth");
  search_cmd->add_option("--k-max", search.k_max, "Maximum gates per combination");
  search_cmd->add_flag("--fixed-k", search.fixed_k, "Enumerate only k = k_max per depth");
  search_cmd->add_option("--alphabet", search.alphabet, "Comma-separated gate alphabet");
  search_cmd->add_option("--max-iters", search.max_iters, "Optimizer evaluation budget");
  search_cmd->add_option("--restarts", search.restarts, "Extra seeded optimizer restarts");
  search_cmd->add_flag("--aggregate", search.aggregate,
                       "One dataset-level result (best by mean energy rank)");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate mixers on a dataset");
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset path")->required();
  eval_cmd->add_option("--out", eval.out_prefix, "Output prefix (.json/.csv)")->required();
  eval_cmd->add_option("--mixer", eval.mixer, "Mixer combination, e.g. RX,RY")->required();
  eval_cmd->add_option("--baseline", eval.baseline, "Baseline combination for paired comparison");
  eval_cmd->add_option("--depths", eval.depths, "Depths to evaluate, e.g. 1,2,3");
  eval_cmd->add_option("--seed", eval.seed, "Base RNG seed");
  eval_cmd->add_option("--workers", eval.workers, "Worker threads")->envname("QARCH_WORKERS");
  eval_cmd->add_option("--max-iters", eval.max_iters, "Optimizer evaluation budget");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Serial vs parallel timing sweeps");
  bench_cmd->add_option("--dataset", bench.dataset, "Dataset path")->required();
  bench_cmd->add_option("--out", bench.out, "Output CSV path")->required();
  bench_cmd->add_option("--p-sweep", bench.p_sweep, "Depth sweep, e.g. 1..4");
  bench_cmd->add_option("--workers-sweep", bench.workers_sweep, "Worker sweep, e.g. 8..64:8");
  bench_cmd->add_option("--modes", bench.modes, "Comma list of serial,parallel");
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per cell");
  bench_cmd->add_option("--p", bench.p, "Depth when no sweep is given");
  bench_cmd->add_option("--workers", bench.workers, "Workers when no sweep is given")
      ->envname("QARCH_WORKERS");
  bench_cmd->add_option("--k-max", bench.k_max, "Maximum gates per combination");
  bench_cmd->add_flag("--fixed-k", bench.fixed_k, "Enumerate only k = k_max per depth");
  bench_cmd->add_option("--max-iters", bench.max_iters, "Optimizer evaluation budget");
  bench_cmd->add_option("--seed", bench.seed, "Base RNG seed");

  try {
    app.parse(argc, argv);
    if (gen_cmd->parsed()) return run_gen_graphs(gen, argc, argv);
    if (search_cmd->parsed()) return run_search(search, argc, argv);
    if (eval_cmd->parsed()) return run_evaluate(eval, argc, argv);
    if (bench_cmd->parsed()) return run_bench(bench, argc, argv);
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << std::endl;
    return 2;
  } catch (const qarch::json::exception& e) {
    std::cerr << "error: parse: " << e.what() << std::endl;
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid-argument: " << e.what() << std::endl;
    return 3;
  } catch (const std::length_error& e) {
    std::cerr << "error: size-limit: " << e.what() << std::endl;
    return 4;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: io: " << e.what() << std::endl;
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << std::endl;
    return 1;
  }
}
