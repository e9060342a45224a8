#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <set>

#include "qarch/search.hpp"

using namespace qarch;

namespace {

SearchConfig small_config() {
  SearchConfig cfg;
  cfg.p_max = 2;
  cfg.k_max = 2;
  cfg.optimizer.max_evals = 25;
  cfg.base_seed = 7;
  return cfg;
}

CandidateResult candidate(int index, int depth, double energy) {
  CandidateResult c;
  c.index = index;
  c.depth = depth;
  c.energy = energy;
  return c;
}

bool same_search_result(const SearchResult& a, const SearchResult& b) {
  if (a.best_mixer != b.best_mixer || a.best_energy != b.best_energy ||
      a.best_depth != b.best_depth || a.best_index != b.best_index)
    return false;
  if (a.candidates.size() != b.candidates.size()) return false;
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    const CandidateResult& x = a.candidates[i];
    const CandidateResult& y = b.candidates[i];
    if (x.index != y.index || x.depth != y.depth || x.combination != y.combination ||
        x.energy != y.energy || x.record.best_params != y.record.best_params ||
        x.record.evaluations != y.record.evaluations)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("enumerate_candidates counts match the closed forms") {
  const auto alphabet = default_alphabet();
  CHECK(enumerate_candidates(alphabet, 4, EnumerationMode::CumulativeK).size() == 780);
  CHECK(enumerate_candidates(alphabet, 4, EnumerationMode::FixedK).size() == 625);
  CHECK(enumerate_candidates(alphabet, 1, EnumerationMode::CumulativeK).size() == 5);

  const auto cumulative = enumerate_candidates(alphabet, 2, EnumerationMode::CumulativeK);
  REQUIRE(cumulative.size() == 30);
  CHECK(cumulative[0] == GateCombination{GateKind::RX});
  CHECK(cumulative[5] == GateCombination{GateKind::RX, GateKind::RX});
}

TEST_CASE("select_best picks maximal energy with deterministic tie-breaks") {
  SECTION("plain maximum") {
    const std::vector<CandidateResult> cands = {candidate(0, 1, 3.0), candidate(1, 1, 4.0),
                                                candidate(2, 1, 2.0)};
    CHECK(select_best(cands).index == 1);
  }
  SECTION("tie goes to the lower index") {
    const std::vector<CandidateResult> cands = {candidate(0, 1, 4.0), candidate(1, 1, 4.0)};
    CHECK(select_best(cands).index == 0);
  }
  SECTION("tie across depths goes to the lower depth") {
    const std::vector<CandidateResult> cands = {candidate(5, 2, 4.0), candidate(9, 1, 4.0)};
    CHECK(select_best(cands).index == 9);
  }
  SECTION("incumbent is retained on ties and wins on higher energy") {
    const std::vector<CandidateResult> cands = {candidate(3, 2, 4.5)};
    CHECK(select_best(cands, candidate(0, 1, 5.0)).index == 0);
    CHECK(select_best(cands, candidate(0, 1, 4.5)).index == 0);
    CHECK(select_best(cands, candidate(0, 1, 4.0)).index == 3);
  }
  SECTION("empty input") {
    CHECK_THROWS_AS(select_best({}), std::invalid_argument);
    CHECK(select_best({}, candidate(1, 1, 2.0)).index == 1);
  }
}

TEST_CASE("parallel_map_candidates returns every index exactly once") {
  std::vector<PendingCandidate> pending;
  for (int i = 0; i < 625; ++i) pending.push_back({i, 1, {GateKind::RX}});

  const auto evaluate = [](const PendingCandidate& task) {
    CandidateResult out;
    out.index = task.index;
    out.energy = static_cast<double>(task.index % 17);
    return out;
  };

  const auto results = parallel_map_candidates(pending, evaluate, 8);
  REQUIRE(results.size() == 625);
  std::set<int> seen;
  for (const auto& r : results) seen.insert(r.index);
  CHECK(seen.size() == 625);
  for (std::size_t i = 0; i < results.size(); ++i)
    CHECK(results[i].index == static_cast<int>(i));
}

TEST_CASE("parallel_map_candidates with one worker equals the serial loop") {
  std::vector<PendingCandidate> pending;
  for (int i = 0; i < 40; ++i) pending.push_back({i, 1, {GateKind::RY}});
  const auto evaluate = [](const PendingCandidate& task) {
    CandidateResult out;
    out.index = task.index;
    out.energy = std::sin(static_cast<double>(task.index));
    return out;
  };
  const auto serial = parallel_map_candidates(pending, evaluate, 1);
  const auto pooled = parallel_map_candidates(pending, evaluate, 4);
  REQUIRE(serial.size() == pooled.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].energy == pooled[i].energy);
}

TEST_CASE("a failing candidate aborts the search and is identified") {
  std::vector<PendingCandidate> pending;
  for (int i = 0; i < 100; ++i) pending.push_back({i, 1, {GateKind::RX}});
  const auto evaluate = [](const PendingCandidate& task) -> CandidateResult {
    if (task.index == 13) throw std::runtime_error("boom");
    CandidateResult out;
    out.index = task.index;
    return out;
  };
  for (int workers : {1, 4}) {
    try {
      parallel_map_candidates(pending, evaluate, workers);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("13") != std::string::npos);
    }
  }
}

TEST_CASE("search_mixer on a singleton space returns the only candidate") {
  Graph g(2);
  g.add_edge(0, 1);
  SearchConfig cfg;
  cfg.p_max = 1;
  cfg.k_max = 1;
  cfg.alphabet = {GateKind::RX};
  const SearchResult r = search_mixer(g, cfg);
  REQUIRE(r.candidates.size() == 1);
  CHECK(r.best_mixer == GateCombination{GateKind::RX});
  CHECK(r.best_depth == 1);
  CHECK(r.best_energy == r.candidates[0].energy);
}

TEST_CASE("search_mixer candidate bookkeeping") {
  const Graph g = erdos_renyi(5, 0.6, 12);
  SearchConfig cfg = small_config();
  const SearchResult r = search_mixer(g, cfg);

  // cumulative-k: (5 + 25) per depth, two depths
  REQUIRE(r.candidates.size() == 60);
  CHECK(r.per_depth_seconds.size() == 2);

  const double optimum = maxcut_bruteforce(g).value;
  double baseline_energy = -1.0;
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const CandidateResult& c = r.candidates[i];
    CHECK(c.index == static_cast<int>(i));
    CHECK(c.depth == (i < 30 ? 1 : 2));
    CHECK(c.energy >= 0.0);
    CHECK(c.energy <= optimum + 1e-9);
    CHECK(c.wall_time_s > 0.0);
    if (c.depth == 1 && c.combination == GateCombination{GateKind::RX})
      baseline_energy = c.energy;
  }
  CHECK(r.best_energy >= baseline_energy);
  CHECK(r.best_energy <= optimum + 1e-9);
}

TEST_CASE("search results are identical for any worker count") {
  const Graph g = erdos_renyi(6, 0.5, 5);
  SearchConfig cfg = small_config();

  cfg.workers = 1;
  const SearchResult serial = search_mixer(g, cfg);
  cfg.workers = 2;
  const SearchResult two = search_mixer(g, cfg);
  cfg.workers = 8;
  const SearchResult eight = search_mixer(g, cfg);

  CHECK(same_search_result(serial, two));
  CHECK(same_search_result(serial, eight));
}

TEST_CASE("fixed-k mode enumerates exactly |A|^k_max per depth") {
  const Graph g = erdos_renyi(4, 0.9, 3);
  SearchConfig cfg;
  cfg.p_max = 2;
  cfg.k_max = 2;
  cfg.mode = EnumerationMode::FixedK;
  cfg.optimizer.max_evals = 1;
  const SearchResult r = search_mixer(g, cfg);
  CHECK(r.candidates.size() == 50);  // 25 per depth
  for (const auto& c : r.candidates) CHECK(c.combination.size() == 2);
}
