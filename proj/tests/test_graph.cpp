#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "oracles.hpp"
#include "qarch/graph.hpp"

using namespace qarch;

namespace {

Graph single_edge() {
  Graph g(2);
  g.add_edge(0, 1);
  return g;
}

Graph triangle() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return g;
}

Graph cycle(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

}  // namespace

TEST_CASE("graph construction enforces simple-graph invariants") {
  Graph g(3);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(1, 0), std::invalid_argument);  // duplicate, unordered
  CHECK_THROWS_AS(Graph(0), std::invalid_argument);
}

TEST_CASE("cut_value matches the maxcut objective") {
  CHECK(cut_value(single_edge(), {{1, -1}}) == 1.0);
  CHECK(cut_value(triangle(), {{1, 1, 1}}) == 0.0);
  CHECK(cut_value(triangle(), {{1, 1, -1}}) == 2.0);
  CHECK_THROWS_AS(cut_value(triangle(), {{1, -1}}), std::invalid_argument);

  SECTION("weighted edges scale the objective") {
    Graph g(2);
    g.add_edge(0, 1, 2.5);
    CHECK(cut_value(g, {{1, -1}}) == 2.5);
  }
}

TEST_CASE("cut_value is invariant under a global spin flip") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = erdos_renyi(8, 0.4, gen());
    CutAssignment z, flipped;
    for (int i = 0; i < 8; ++i) {
      const int s = (gen() & 1) ? 1 : -1;
      z.spins.push_back(s);
      flipped.spins.push_back(-s);
    }
    CHECK(cut_value(g, z) == cut_value(g, flipped));
    CHECK(cut_value(g, z) >= 0.0);
    CHECK(cut_value(g, z) <= g.total_weight());
  }
}

TEST_CASE("maxcut_bruteforce on known instances") {
  CHECK(maxcut_bruteforce(single_edge()).value == 1.0);
  CHECK(maxcut_bruteforce(triangle()).value == 2.0);
  CHECK(maxcut_bruteforce(cycle(4)).value == 4.0);

  SECTION("argmax achieves the reported value and fixes node 0 to +1") {
    const auto sol = maxcut_bruteforce(cycle(4));
    CHECK(sol.argmax.spins[0] == 1);
    CHECK(cut_value(cycle(4), sol.argmax) == sol.value);
  }

  SECTION("node cap is enforced") {
    CHECK_THROWS_AS(maxcut_bruteforce(Graph(25)), std::length_error);
    CHECK_THROWS_AS(maxcut_bruteforce(cycle(6), 5), std::length_error);
  }
}

TEST_CASE("maxcut_bruteforce agrees with full exhaustive enumeration") {
  // Independent oracle: all 2^n assignments, no symmetry shortcuts.
  const Graph reg = random_regular(10, 4, 20260810);
  CHECK(maxcut_bruteforce(reg).value == oracle::maxcut_exhaustive(reg));

  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = erdos_renyi(4 + static_cast<int>(gen() % 7), 0.5, gen());
    CHECK(maxcut_bruteforce(g).value == oracle::maxcut_exhaustive(g));
  }
}

TEST_CASE("maxcut_bruteforce dominates random assignments") {
  std::mt19937_64 gen(3);
  const Graph g = erdos_renyi(9, 0.5, 17);
  const double best = maxcut_bruteforce(g).value;
  for (int trial = 0; trial < 200; ++trial) {
    CutAssignment z;
    for (int i = 0; i < 9; ++i) z.spins.push_back((gen() & 1) ? 1 : -1);
    CHECK(cut_value(g, z) <= best);
  }
}

TEST_CASE("erdos_renyi generator") {
  SECTION("edge probability extremes") {
    CHECK(erdos_renyi(5, 0.0, 1).edges().empty());
    CHECK(erdos_renyi(5, 1.0, 1).edges().size() == 10);
    CHECK(erdos_renyi(10, 0.5, 42).n_nodes() == 10);
  }
  SECTION("same seed reproduces the edge list exactly") {
    const Graph a = erdos_renyi(10, 0.5, 123);
    const Graph b = erdos_renyi(10, 0.5, 123);
    CHECK(a == b);
    CHECK_FALSE(a == erdos_renyi(10, 0.5, 124));
  }
  SECTION("invalid arguments") {
    CHECK_THROWS_AS(erdos_renyi(0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(erdos_renyi(5, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(erdos_renyi(5, 1.5, 1), std::invalid_argument);
  }
}

TEST_CASE("random_regular generator") {
  SECTION("every node has the requested degree") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 77ULL}) {
      const Graph g = random_regular(10, 4, seed);
      for (int d : g.degrees()) CHECK(d == 4);
    }
  }
  SECTION("degree zero gives an empty edge set") {
    CHECK(random_regular(6, 0, 5).edges().empty());
  }
  SECTION("parity and size constraints") {
    CHECK_THROWS_AS(random_regular(5, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_regular(4, 4, 1), std::invalid_argument);
  }
  SECTION("seeded determinism") {
    CHECK(random_regular(10, 4, 9) == random_regular(10, 4, 9));
  }
}
