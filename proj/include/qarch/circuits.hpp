#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qarch/graph.hpp"

namespace qarch {

/// Parameterized gate alphabet: three single-qubit rotations and two
/// two-qubit entangling rotations.
enum class GateKind { RX, RY, RZ, RXX, RYY };

constexpr int gate_arity(GateKind kind) {
  return (kind == GateKind::RXX || kind == GateKind::RYY) ? 2 : 1;
}

constexpr const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::RXX: return "RXX";
    case GateKind::RYY: return "RYY";
  }
  return "?";
}

inline GateKind gate_from_name(std::string_view name) {
  if (name == "RX") return GateKind::RX;
  if (name == "RY") return GateKind::RY;
  if (name == "RZ") return GateKind::RZ;
  if (name == "RXX") return GateKind::RXX;
  if (name == "RYY") return GateKind::RYY;
  throw std::invalid_argument("unknown gate name: " + std::string(name));
}

inline std::vector<GateKind> default_alphabet() {
  return {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RXX, GateKind::RYY};
}

/// An ordered sequence of alphabet gates; one candidate mixer layer.
using GateCombination = std::vector<GateKind>;

inline std::string combination_name(const GateCombination& comb) {
  std::string out;
  for (std::size_t i = 0; i < comb.size(); ++i) {
    if (i > 0) out += ',';
    out += gate_name(comb[i]);
  }
  return out;
}

inline GateCombination combination_from_name(std::string_view text) {
  GateCombination comb;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find(',', start);
    if (stop == std::string_view::npos) stop = text.size();
    comb.push_back(gate_from_name(text.substr(start, stop - start)));
    start = stop + 1;
  }
  return comb;
}

/// All ordered length-k sequences over the alphabet, with repetition, in
/// lexicographic order of alphabet indices. Count is |alphabet|^k.
inline std::vector<GateCombination> gate_combinations(
    const std::vector<GateKind>& alphabet, int k) {
  if (alphabet.empty()) throw std::invalid_argument("gate_combinations: empty alphabet");
  if (k < 1) throw std::invalid_argument("gate_combinations: k must be at least 1");

  std::size_t count = 1;
  for (int i = 0; i < k; ++i) count *= alphabet.size();

  std::vector<GateCombination> out;
  out.reserve(count);
  std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
  for (std::size_t c = 0; c < count; ++c) {
    GateCombination comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = alphabet[digits[static_cast<std::size_t>(i)]];
    out.push_back(std::move(comb));
    // increment the least significant digit (rightmost) last, so ordering is
    // lexicographic on the sequence read left to right
    for (int i = k - 1; i >= 0; --i) {
      if (++digits[static_cast<std::size_t>(i)] < alphabet.size()) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

/// One expanded mixer gate. q1 is -1 for single-qubit gates.
struct MixerGate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;
};

/// A mixer layer: the generating combination expanded over the graph. Every
/// gate in the layer shares the layer's single beta parameter, applied with
/// angle 2*beta.
struct MixerLayer {
  GateCombination combination;
  std::vector<MixerGate> gates;
};

/// Expands a combination over the graph: single-qubit gates broadcast over
/// nodes in ascending order, two-qubit gates over edges in graph order.
inline MixerLayer build_mixer(const Graph& g, const GateCombination& comb) {
  MixerLayer layer;
  layer.combination = comb;
  for (GateKind kind : comb) {
    if (gate_arity(kind) == 1) {
      for (int q = 0; q < g.n_nodes(); ++q) layer.gates.push_back({kind, q, -1});
    } else {
      for (const Edge& e : g.edges()) layer.gates.push_back({kind, e.u, e.v});
    }
  }
  return layer;
}

/// Depth-p alternating ansatz: p blocks of (cost phase, mixer layer) applied
/// to the uniform superposition. Parameters are gamma_1..gamma_p then
/// beta_1..beta_p; the shared-beta convention keeps the count at 2p
/// regardless of mixer length.
struct QaoaAnsatz {
  Graph graph;
  MixerLayer mixer;
  int depth = 1;

  int parameter_count() const { return 2 * depth; }
};

inline QaoaAnsatz build_qaoa(const Graph& g, MixerLayer mixer, int p) {
  if (p < 1) throw std::invalid_argument("build_qaoa: depth must be at least 1");
  return QaoaAnsatz{g, std::move(mixer), p};
}

}  // namespace qarch
