#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qarch/circuits.hpp"
#include "qarch/graph.hpp"

namespace qarch {

// Dense statevector limit: 2^24 complex doubles (256 MiB).
inline constexpr int kMaxQubits = 24;

/// 2^n complex amplitudes. Basis index b stores qubit q in bit q of b;
/// bit value 0 means z_q = +1, bit value 1 means z_q = -1.
struct Statevector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amps;

  std::size_t dim() const { return amps.size(); }

  double norm_sq() const {
    double sum = 0.0;
    for (const auto& a : amps) sum += std::norm(a);
    return sum;
  }
};

inline Statevector init_plus_state(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::length_error("init_plus_state: qubit count out of [1, 24]");
  Statevector s;
  s.n_qubits = n;
  const std::size_t dim = std::size_t{1} << n;
  s.amps.assign(dim, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
  return s;
}

namespace detail {

inline void check_qubit(const Statevector& s, int q) {
  if (q < 0 || q >= s.n_qubits) throw std::invalid_argument("qubit index out of range");
}

// In-place single-qubit rotation kernels. Pairs (i0, i1 = i0 | 1<<q) are
// visited exactly once via the block/offset split on bit q.

inline void apply_rx(Statevector& s, int q, double angle) {
  const double c = std::cos(0.5 * angle);
  const double sn = std::sin(0.5 * angle);
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = s.dim();
  auto* a = s.amps.data();
  for (std::size_t block = 0; block < dim; block += 2 * mask) {
    for (std::size_t off = 0; off < mask; ++off) {
      const std::size_t i0 = block + off;
      const std::size_t i1 = i0 + mask;
      const std::complex<double> a0 = a[i0];
      const std::complex<double> a1 = a[i1];
      // RX: [[c, -i s], [-i s, c]]
      a[i0] = {c * a0.real() + sn * a1.imag(), c * a0.imag() - sn * a1.real()};
      a[i1] = {c * a1.real() + sn * a0.imag(), c * a1.imag() - sn * a0.real()};
    }
  }
}

inline void apply_ry(Statevector& s, int q, double angle) {
  const double c = std::cos(0.5 * angle);
  const double sn = std::sin(0.5 * angle);
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = s.dim();
  auto* a = s.amps.data();
  for (std::size_t block = 0; block < dim; block += 2 * mask) {
    for (std::size_t off = 0; off < mask; ++off) {
      const std::size_t i0 = block + off;
      const std::size_t i1 = i0 + mask;
      const std::complex<double> a0 = a[i0];
      const std::complex<double> a1 = a[i1];
      // RY: [[c, -s], [s, c]]
      a[i0] = {c * a0.real() - sn * a1.real(), c * a0.imag() - sn * a1.imag()};
      a[i1] = {sn * a0.real() + c * a1.real(), sn * a0.imag() + c * a1.imag()};
    }
  }
}

inline void apply_rz(Statevector& s, int q, double angle) {
  const std::complex<double> p0(std::cos(0.5 * angle), -std::sin(0.5 * angle));
  const std::complex<double> p1 = std::conj(p0);
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = s.dim();
  auto* a = s.amps.data();
  for (std::size_t block = 0; block < dim; block += 2 * mask) {
    for (std::size_t off = 0; off < mask; ++off) {
      const std::size_t i0 = block + off;
      a[i0] *= p0;
      a[i0 + mask] *= p1;
    }
  }
}

// exp(-i angle/2 X(u) X(v)): couples b with b ^ (1<<u | 1<<v). Iterating
// states with bit u clear visits each coupled pair exactly once.
inline void apply_rxx(Statevector& s, int u, int v, double angle) {
  const double c = std::cos(0.5 * angle);
  const double sn = std::sin(0.5 * angle);
  const std::size_t mask_u = std::size_t{1} << u;
  const std::size_t flip = mask_u | (std::size_t{1} << v);
  const std::size_t dim = s.dim();
  auto* a = s.amps.data();
  for (std::size_t block = 0; block < dim; block += 2 * mask_u) {
    for (std::size_t off = 0; off < mask_u; ++off) {
      const std::size_t i0 = block + off;
      const std::size_t i1 = i0 ^ flip;
      const std::complex<double> a0 = a[i0];
      const std::complex<double> a1 = a[i1];
      a[i0] = {c * a0.real() + sn * a1.imag(), c * a0.imag() - sn * a1.real()};
      a[i1] = {c * a1.real() + sn * a0.imag(), c * a1.imag() - sn * a0.real()};
    }
  }
}

// exp(-i angle/2 Y(u) Y(v)): like RXX but the coupling sign is -1 when the
// pair's bits at (u, v) agree ({00,11}) and +1 when they differ ({01,10}).
inline void apply_ryy(Statevector& s, int u, int v, double angle) {
  const double c = std::cos(0.5 * angle);
  const double sn = std::sin(0.5 * angle);
  const std::size_t mask_u = std::size_t{1} << u;
  const std::size_t mask_v = std::size_t{1} << v;
  const std::size_t flip = mask_u | mask_v;
  const std::size_t dim = s.dim();
  auto* a = s.amps.data();
  for (std::size_t block = 0; block < dim; block += 2 * mask_u) {
    for (std::size_t off = 0; off < mask_u; ++off) {
      const std::size_t i0 = block + off;
      const std::size_t i1 = i0 ^ flip;
      const double sign = (i0 & mask_v) ? sn : -sn;
      const std::complex<double> a0 = a[i0];
      const std::complex<double> a1 = a[i1];
      a[i0] = {c * a0.real() + sign * a1.imag(), c * a0.imag() - sign * a1.real()};
      a[i1] = {c * a1.real() + sign * a0.imag(), c * a1.imag() - sign * a0.real()};
    }
  }
}

inline void apply_gate(Statevector& s, GateKind kind, int q0, int q1, double angle) {
  switch (kind) {
    case GateKind::RX: apply_rx(s, q0, angle); return;
    case GateKind::RY: apply_ry(s, q0, angle); return;
    case GateKind::RZ: apply_rz(s, q0, angle); return;
    case GateKind::RXX: apply_rxx(s, q0, q1, angle); return;
    case GateKind::RYY: apply_ryy(s, q0, q1, angle); return;
  }
}

inline void apply_mixer_layer(Statevector& s, const MixerLayer& layer, double beta) {
  const double angle = 2.0 * beta;
  for (const MixerGate& gate : layer.gates) {
    apply_gate(s, gate.kind, gate.q0, gate.q1, angle);
  }
}

}  // namespace detail

/// Per-basis-state cut values for a graph, precomputed once and shared by the
/// cost phase and the expectation. Unit-weight graphs get an integer table so
/// the phase rotation reduces to a small lookup.
class CostDiagonal {
 public:
  explicit CostDiagonal(const Graph& g) : n_qubits_(g.n_nodes()) {
    if (n_qubits_ > kMaxQubits)
      throw std::length_error("CostDiagonal: graph exceeds simulator qubit limit");
    const std::size_t dim = std::size_t{1} << n_qubits_;
    values_.resize(dim);
    for (std::size_t b = 0; b < dim; ++b) values_[b] = cut_value_bits(g, b);

    if (g.unit_weights()) {
      int_values_.resize(dim);
      max_int_ = 0;
      for (std::size_t b = 0; b < dim; ++b) {
        int_values_[b] = static_cast<std::uint32_t>(values_[b] + 0.5);
        if (int_values_[b] > max_int_) max_int_ = int_values_[b];
      }
    }
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<double>& values() const { return values_; }

  /// In-place diagonal phase: amps[b] *= exp(-i gamma * cut(b)).
  void apply_phase(Statevector& s, double gamma) const {
    check(s);
    auto* a = s.amps.data();
    if (!int_values_.empty()) {
      std::vector<std::complex<double>> table(max_int_ + 1);
      for (std::uint32_t k = 0; k <= max_int_; ++k) {
        table[k] = {std::cos(gamma * k), -std::sin(gamma * k)};
      }
      for (std::size_t b = 0; b < values_.size(); ++b) a[b] *= table[int_values_[b]];
    } else {
      for (std::size_t b = 0; b < values_.size(); ++b) {
        a[b] *= std::complex<double>(std::cos(gamma * values_[b]),
                                     -std::sin(gamma * values_[b]));
      }
    }
  }

  /// sum_b |amps[b]|^2 cut(b)
  double expectation(const Statevector& s) const {
    check(s);
    double sum = 0.0;
    const auto* a = s.amps.data();
    for (std::size_t b = 0; b < values_.size(); ++b) sum += std::norm(a[b]) * values_[b];
    return sum;
  }

 private:
  void check(const Statevector& s) const {
    if (s.n_qubits != n_qubits_)
      throw std::invalid_argument("statevector/graph dimension mismatch");
  }

  int n_qubits_;
  std::vector<double> values_;
  std::vector<std::uint32_t> int_values_;
  std::uint32_t max_int_ = 0;
};

/// exp(-i gamma C) |s>, value in / value out.
inline Statevector apply_cost_phase(Statevector s, const Graph& g, double gamma) {
  CostDiagonal(g).apply_phase(s, gamma);
  return s;
}

/// Single-qubit rotation, value in / value out.
inline Statevector apply_rotation(Statevector s, GateKind kind, int qubit, double angle) {
  if (gate_arity(kind) != 1)
    throw std::invalid_argument("apply_rotation: gate needs an edge target");
  detail::check_qubit(s, qubit);
  detail::apply_gate(s, kind, qubit, -1, angle);
  return s;
}

/// Two-qubit rotation over an edge, value in / value out.
inline Statevector apply_rotation(Statevector s, GateKind kind, int u, int v, double angle) {
  if (gate_arity(kind) != 2)
    throw std::invalid_argument("apply_rotation: gate takes a single qubit target");
  detail::check_qubit(s, u);
  detail::check_qubit(s, v);
  if (u == v) throw std::invalid_argument("apply_rotation: edge endpoints must differ");
  detail::apply_gate(s, kind, u, v, angle);
  return s;
}

inline double expectation_cut(const Statevector& s, const Graph& g) {
  if (g.n_nodes() != s.n_qubits)
    throw std::invalid_argument("expectation_cut: dimension mismatch");
  return CostDiagonal(g).expectation(s);
}

/// Reusable evaluation workspace: the cost diagonal is computed once and the
/// amplitude buffer is reused across parameter settings. One instance is
/// owned by exactly one optimization run at a time.
class AnsatzSimulator {
 public:
  explicit AnsatzSimulator(QaoaAnsatz ansatz)
      : ansatz_(std::move(ansatz)), cost_(ansatz_.graph) {
    if (ansatz_.graph.n_nodes() < 1 || ansatz_.graph.n_nodes() > kMaxQubits)
      throw std::length_error("AnsatzSimulator: qubit count out of [1, 24]");
    state_ = init_plus_state(ansatz_.graph.n_nodes());
  }

  const QaoaAnsatz& ansatz() const { return ansatz_; }
  const Statevector& state() const { return state_; }

  /// Runs the full ansatz for the given parameters, leaving the final state
  /// in the workspace buffer. params = (gamma_1..gamma_p, beta_1..beta_p).
  void run(std::span<const double> params) {
    const int p = ansatz_.depth;
    if (static_cast<int>(params.size()) != 2 * p)
      throw std::invalid_argument("simulate_ansatz: expected 2p parameters");
    const double fill = std::pow(2.0, -0.5 * ansatz_.graph.n_nodes());
    for (auto& a : state_.amps) a = {fill, 0.0};
    for (int layer = 0; layer < p; ++layer) {
      cost_.apply_phase(state_, params[static_cast<std::size_t>(layer)]);
      detail::apply_mixer_layer(state_, ansatz_.mixer,
                                params[static_cast<std::size_t>(p + layer)]);
    }
  }

  double expected_cut(std::span<const double> params) {
    run(params);
    return cost_.expectation(state_);
  }

 private:
  QaoaAnsatz ansatz_;
  CostDiagonal cost_;
  Statevector state_;
};

/// e^{-i beta_p B} e^{-i gamma_p C} ... e^{-i beta_1 B} e^{-i gamma_1 C} |+>^n
inline Statevector simulate_ansatz(const QaoaAnsatz& ansatz, std::span<const double> params) {
  AnsatzSimulator sim(ansatz);
  sim.run(params);
  return sim.state();
}

}  // namespace qarch
