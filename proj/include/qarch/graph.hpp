#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qarch/rng.hpp"

namespace qarch {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.u == b.u && a.v == b.v && a.weight == b.weight;
}

/// Undirected simple graph over 0-based contiguous node indices.
/// No self-loops, no duplicate edges under unordered comparison.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n_nodes) : n_nodes_(n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("graph needs at least one node");
  }

  void add_edge(int u, int v, double weight = 1.0) {
    if (u < 0 || v < 0 || u >= n_nodes_ || v >= n_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (has_edge(u, v)) throw std::invalid_argument("duplicate edge");
    edges_.push_back({u, v, weight});
  }

  bool has_edge(int u, int v) const {
    for (const Edge& e : edges_) {
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
    }
    return false;
  }

  int n_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  double total_weight() const {
    double sum = 0.0;
    for (const Edge& e : edges_) sum += e.weight;
    return sum;
  }

  bool unit_weights() const {
    for (const Edge& e : edges_) {
      if (e.weight != 1.0) return false;
    }
    return true;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_nodes_), 0);
    for (const Edge& e : edges_) {
      ++deg[static_cast<std::size_t>(e.u)];
      ++deg[static_cast<std::size_t>(e.v)];
    }
    return deg;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_nodes_ == b.n_nodes_ && a.edges_ == b.edges_;
  }

 private:
  int n_nodes_ = 1;
  std::vector<Edge> edges_;
};

/// One node-partition: spins[i] is +1 or -1 for node i.
struct CutAssignment {
  std::vector<int> spins;
};

/// Cut weight of assignment z: (1/2) sum_(u,v) w_uv (1 - z_u z_v).
inline double cut_value(const Graph& g, const CutAssignment& z) {
  if (static_cast<int>(z.spins.size()) != g.n_nodes())
    throw std::invalid_argument("assignment length does not match node count");
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    sum += e.weight * (1 - z.spins[static_cast<std::size_t>(e.u)] *
                               z.spins[static_cast<std::size_t>(e.v)]);
  }
  return 0.5 * sum;
}

/// Cut weight of the partition encoded by bitmask: bit q set means z_q = -1.
inline double cut_value_bits(const Graph& g, std::uint64_t bits) {
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    if (((bits >> e.u) ^ (bits >> e.v)) & 1ULL) sum += e.weight;
  }
  return sum;
}

struct MaxcutSolution {
  double value = 0.0;
  CutAssignment argmax;
};

/// Exhaustive maxcut. Fixes z_0 = +1 (flip symmetry halves the enumeration);
/// the first assignment attaining the maximum wins, so ties resolve to the
/// lowest binary encoding.
inline MaxcutSolution maxcut_bruteforce(const Graph& g, int node_cap = 24) {
  const int n = g.n_nodes();
  if (n > node_cap)
    throw std::length_error("maxcut_bruteforce: graph exceeds node cap " +
                            std::to_string(node_cap));
  std::uint64_t best_bits = 0;
  double best = 0.0;
  const std::uint64_t count = 1ULL << (n - 1);
  for (std::uint64_t m = 0; m < count; ++m) {
    const std::uint64_t bits = m << 1;  // node 0 stays +1
    const double value = cut_value_bits(g, bits);
    if (value > best) {
      best = value;
      best_bits = bits;
    }
  }
  MaxcutSolution sol;
  sol.value = best;
  sol.argmax.spins.resize(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    sol.argmax.spins[static_cast<std::size_t>(q)] = ((best_bits >> q) & 1ULL) ? -1 : 1;
  }
  return sol;
}

/// G(n, p) with every unordered pair included independently. Deterministic in
/// (n, edge_prob, seed); pairs are visited in lexicographic order.
inline Graph erdos_renyi(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi: n must be at least 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw std::invalid_argument("erdos_renyi: edge_prob must be in [0, 1]");
  std::mt19937_64 gen(seed);
  Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng::canonical(gen) < edge_prob) g.add_edge(u, v);
    }
  }
  return g;
}

/// Random d-regular graph via the pairing model: shuffle n*d stubs, pair them
/// off, and restart on self-loops or multi-edges (at most 1000 attempts).
inline Graph random_regular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 0) throw std::invalid_argument("random_regular: bad size");
  if (d >= n) throw std::invalid_argument("random_regular: degree must be below n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("random_regular: n*d must be even");

  Graph g(n);
  if (d == 0) return g;

  std::mt19937_64 gen(seed);
  std::vector<int> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int node = 0; node < n; ++node) {
    for (int j = 0; j < d; ++j) stubs[static_cast<std::size_t>(node) * d + j] = node;
  }

  for (int attempt = 0; attempt < 1000; ++attempt) {
    rng::shuffle(stubs, gen);
    Graph candidate(n);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const int u = std::min(stubs[i], stubs[i + 1]);
      const int v = std::max(stubs[i], stubs[i + 1]);
      if (u == v || candidate.has_edge(u, v)) {
        ok = false;
        break;
      }
      candidate.add_edge(u, v);
    }
    if (ok) return candidate;
  }
  throw std::runtime_error("random_regular: no simple pairing found in 1000 attempts");
}

}  // namespace qarch
