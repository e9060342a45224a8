#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "qarch/io.hpp"

namespace fs = std::filesystem;
using qarch::json;

namespace {

const std::string kCli = QARCH_CLI_PATH;

struct RunOutput {
  int exit_code = -1;
  std::string stderr_text;
};

RunOutput run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path err_file = scratch / "stderr.txt";
  const std::string command = kCli + " " + args + " >/dev/null 2>" + err_file.string();
  const int status = std::system(command.c_str());
  RunOutput out;
  out.exit_code = WEXITSTATUS(status);
  if (fs::exists(err_file)) {
    out.stderr_text = qarch::read_text_file(err_file.string());
    fs::remove(err_file);
  }
  return out;
}

fs::path make_scratch() {
  const fs::path dir = fs::temp_directory_path() / "qarch_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json stripped(const std::string& path) {
  json j = qarch::read_json_file(path);
  qarch::strip_timing(j);
  return j;
}

}  // namespace

TEST_CASE("gen-graphs writes a deterministic dataset") {
  const fs::path dir = make_scratch();
  const std::string a = (dir / "a.json").string();
  const std::string b = (dir / "b.json").string();

  REQUIRE(run_cli("gen-graphs --count 20 --nodes 10 --kind er --seed 11 --out " + a, dir)
              .exit_code == 0);
  REQUIRE(run_cli("gen-graphs --count 20 --nodes 10 --kind er --seed 11 --out " + b, dir)
              .exit_code == 0);

  const qarch::Dataset da = qarch::dataset_from_json(qarch::read_json_file(a));
  CHECK(da.graphs.size() == 20);
  CHECK(da.graphs[0].n_nodes() == 10);
  CHECK(da.seed == 11);

  // Dataset bytes are identical up to the embedded manifest reference, which
  // names the output file itself.
  json ja = qarch::read_json_file(a);
  json jb = qarch::read_json_file(b);
  ja.erase("manifest");
  jb.erase("manifest");
  CHECK(ja.dump() == jb.dump());

  SECTION("regular datasets have constant degree") {
    const std::string r = (dir / "r.json").string();
    REQUIRE(run_cli("gen-graphs --count 5 --nodes 10 --kind regular --degree 4 --seed 3 --out " + r,
                    dir)
                .exit_code == 0);
    for (const qarch::Graph& g : qarch::dataset_from_json(qarch::read_json_file(r)).graphs) {
      for (int d : g.degrees()) CHECK(d == 4);
    }
  }
}

TEST_CASE("gen-graphs re-run with the same out path is byte-identical") {
  const fs::path dir = make_scratch();
  const std::string out = (dir / "data.json").string();
  const std::string flags = "gen-graphs --count 4 --nodes 6 --seed 9 --out " + out;

  REQUIRE(run_cli(flags, dir).exit_code == 0);
  const std::string first = qarch::read_text_file(out);
  REQUIRE(run_cli(flags, dir).exit_code == 0);
  CHECK(qarch::read_text_file(out) == first);
}

TEST_CASE("search output is identical across worker counts") {
  const fs::path dir = make_scratch();
  const std::string data = (dir / "data.json").string();
  REQUIRE(run_cli("gen-graphs --count 2 --nodes 6 --seed 5 --out " + data, dir).exit_code == 0);

  const std::string base = " search --dataset " + data +
                           " --p-max 1 --k-max 2 --max-iters 20 --seed 1 --out ";
  REQUIRE(run_cli(base + (dir / "w1").string() + " --workers 1", dir).exit_code == 0);
  REQUIRE(run_cli(base + (dir / "w2").string() + " --workers 2", dir).exit_code == 0);

  for (const std::string name : {"search_g000.json", "search_g001.json"}) {
    json a = stripped((dir / "w1" / name).string());
    json b = stripped((dir / "w2" / name).string());
    // manifests legitimately differ in the --workers flag
    a.erase("manifest");
    b.erase("manifest");
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("search --aggregate emits one dataset-level result") {
  const fs::path dir = make_scratch();
  const std::string data = (dir / "data.json").string();
  REQUIRE(run_cli("gen-graphs --count 3 --nodes 5 --seed 2 --out " + data, dir).exit_code == 0);
  REQUIRE(run_cli("search --dataset " + data + " --p-max 1 --k-max 1 --max-iters 10 " +
                      "--aggregate --out " + (dir / "agg").string(),
                  dir)
              .exit_code == 0);

  const json j = qarch::read_json_file((dir / "agg" / "search_aggregate.json").string());
  CHECK(j["mode"] == "aggregate");
  CHECK(j["candidates"].size() == 5);
  CHECK(j["per_graph"].size() == 3);
  CHECK(j["best"].contains("mean_rank"));
}

TEST_CASE("evaluate with mixer == baseline reports zero deltas") {
  const fs::path dir = make_scratch();
  const std::string data = (dir / "data.json").string();
  REQUIRE(run_cli("gen-graphs --count 2 --nodes 5 --seed 4 --out " + data, dir).exit_code == 0);
  REQUIRE(run_cli("evaluate --dataset " + data +
                      " --mixer RX --baseline RX --depths 1 --max-iters 15 --out " +
                      (dir / "eval").string(),
                  dir)
              .exit_code == 0);

  const json j = qarch::read_json_file((dir / "eval.json").string());
  for (const json& d : j["deltas"]) CHECK(d["mean_ratio_delta"] == 0.0);

  const std::string csv = qarch::read_text_file((dir / "eval.csv").string());
  CHECK(csv.rfind("graph_id,p,mixer,energy,classical,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 2 graphs x 2 mixers
}

TEST_CASE("bench with a single serial cell emits one record") {
  const fs::path dir = make_scratch();
  const std::string data = (dir / "data.json").string();
  REQUIRE(run_cli("gen-graphs --count 1 --nodes 4 --seed 8 --out " + data, dir).exit_code == 0);
  REQUIRE(run_cli("bench --dataset " + data +
                      " --modes serial --reps 1 --p 1 --k-max 1 --max-iters 5 --out " +
                      (dir / "bench.csv").string(),
                  dir)
              .exit_code == 0);

  const std::string csv = qarch::read_text_file((dir / "bench.csv").string());
  CHECK(csv.rfind("mode,workers,p,graph_id,rep,wall_time_s\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("serial,1,1,0,0,") != std::string::npos);
  CHECK(fs::exists(dir / "bench.csv.manifest.json"));
}

TEST_CASE("QARCH_WORKERS provides the --workers default") {
  const fs::path dir = make_scratch();
  const std::string data = (dir / "data.json").string();
  REQUIRE(run_cli("gen-graphs --count 1 --nodes 4 --seed 1 --out " + data, dir).exit_code == 0);

  const fs::path err_file = dir / "stderr.txt";
  const std::string command = "QARCH_WORKERS=2 " + kCli + " search --dataset " + data +
                              " --p-max 1 --k-max 1 --max-iters 5 --out " +
                              (dir / "env_out").string() + " >/dev/null 2>" + err_file.string();
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);

  const json manifest = qarch::read_json_file((dir / "env_out" / "manifest.json").string());
  CHECK(manifest["config"]["workers"] == 2);
}

TEST_CASE("error classes map to distinct exit codes and one-line messages") {
  const fs::path dir = make_scratch();

  SECTION("missing dataset file") {
    const RunOutput r = run_cli("search --dataset /nonexistent.json --out " +
                                    (dir / "x").string(),
                                dir);
    CHECK(r.exit_code == 6);
    CHECK(r.stderr_text.rfind("error: io:", 0) == 0);
  }
  SECTION("invalid generator parameters") {
    const RunOutput r = run_cli("gen-graphs --kind regular --nodes 5 --degree 3 --out " +
                                    (dir / "y.json").string(),
                                dir);
    CHECK(r.exit_code == 3);
    CHECK(r.stderr_text.rfind("error: invalid-argument:", 0) == 0);
  }
  SECTION("unparseable dataset") {
    const std::string bad = (dir / "bad.json").string();
    qarch::write_text_file(bad, "{not json");
    const RunOutput r = run_cli("search --dataset " + bad + " --out " + (dir / "z").string(), dir);
    CHECK(r.exit_code == 5);
    CHECK(r.stderr_text.rfind("error: parse:", 0) == 0);
  }
  SECTION("usage errors") {
    const RunOutput r = run_cli("search", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.rfind("error: usage:", 0) == 0);
  }
}
