// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qchan/core/channel.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// Brickwork circuit on a ring of L qubits: per step, e^{-iσx φ_x} on every
/// qubit, then e^{i (n⊗n) φ_nn} on every adjacent pair (periodic boundary).
struct CircuitParams {
  int n_qubits = 14;
  double phi_x = 0.5;
  double phi_nn = 1.0;
  /// Leftmost qubit of the observed pair; the pair is (first, first + 1 mod L).
  int subsystem_first = 0;

  int subsystem_second() const { return (subsystem_first + 1) % n_qubits; }

  void validate() const {
    if (n_qubits < 3) throw ConfigError("CircuitParams: need at least 3 qubits");
    if (n_qubits > 24) throw ConfigError("CircuitParams: more than 24 qubits is not supported");
    if (subsystem_first < 0 || subsystem_first >= n_qubits) throw ConfigError("CircuitParams: subsystem index out of range");
  }
};

/// Statevector on L qubits; qubit 0 is the most significant bit.
class CircuitState {
 public:
  explicit CircuitState(int n_qubits) : n_(n_qubits), amp_(std::size_t{1} << n_qubits, cplx(0.0, 0.0)) { amp_[0] = 1.0; }

  int n_qubits() const { return n_; }
  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  std::size_t bit(int q) const { return std::size_t{1} << (n_ - 1 - q); }

  /// Places `pair_state` (4 amplitudes, qubit a leftmost) on qubits (a, b)
  /// with every other qubit in |0⟩.
  void set_pair_product(int a, int b, const CVector& pair_state) {
    std::fill(amp_.begin(), amp_.end(), cplx(0.0, 0.0));
    for (std::size_t s = 0; s < 4; ++s) {
      std::size_t idx = 0;
      if (s & 2) idx |= bit(a);
      if (s & 1) idx |= bit(b);
      amp_[idx] = pair_state[static_cast<Eigen::Index>(s)];
    }
  }

  /// e^{-iσx φ} on qubit q.
  void apply_rx(int q, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const std::size_t m = bit(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & m) continue;
      const cplx a0 = amp_[i], a1 = amp_[i | m];
      amp_[i] = c * a0 - kI * s * a1;
      amp_[i | m] = -kI * s * a0 + c * a1;
    }
  }

  /// e^{i (n⊗n) φ} on qubits (a, b).
  void apply_controlled_phase(int a, int b, double phi) {
    const std::size_t m = bit(a) | bit(b);
    const cplx ph = std::exp(kI * phi);
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & m) == m) amp_[i] *= ph;
  }

  void apply_diagonal(const std::vector<cplx>& diag) {
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] *= diag[i];
  }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Reduced density matrix of qubits (a, b), a as the leftmost factor.
  CMatrix reduced_pair(int a, int b) const {
    const std::size_t ma = bit(a), mb = bit(b);
    CMatrix rho = CMatrix::Zero(4, 4);
    std::array<cplx, 4> loc{};
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & (ma | mb)) continue;
      loc[0] = amp_[i];
      loc[1] = amp_[i | mb];
      loc[2] = amp_[i | ma];
      loc[3] = amp_[i | ma | mb];
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) rho(r, c) += loc[r] * std::conj(loc[c]);
    }
    return rho;
  }

 private:
  int n_;
  std::vector<cplx> amp_;
};

/// Product of all nearest-neighbour controlled phases on the ring, as a
/// diagonal: phase e^{i φ · #(adjacent pairs both in |1⟩)}.
inline std::vector<cplx> ring_phase_diagonal(int n_qubits, double phi) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t mask = dim - 1;
  std::vector<cplx> diag(dim);
  std::vector<cplx> table(static_cast<std::size_t>(n_qubits) + 1);
  for (int k = 0; k <= n_qubits; ++k) table[static_cast<std::size_t>(k)] = std::exp(kI * (phi * k));
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t rot = ((i << 1) | (i >> (n_qubits - 1))) & mask;
    diag[i] = table[static_cast<std::size_t>(std::popcount(i & rot))];
  }
  return diag;
}

inline void circuit_step(CircuitState& state, const CircuitParams& p, const std::vector<cplx>& phase_diag) {
  for (int q = 0; q < p.n_qubits; ++q) state.apply_rx(q, p.phi_x);
  state.apply_diagonal(phase_diag);
}

/// Reduced two-qubit dynamics of the observed pair for t = 1..n_steps.
/// A mixed initial pair state is handled exactly by evolving each of its
/// eigenvectors and mixing the reduced states with the eigenvalue weights.
inline Trajectory simulate_circuit_subsystem(const CircuitParams& p, const DensityMatrix& sub_init, int n_steps) {
  p.validate();
  require_dims(sub_init.dim() == 4, "simulate_circuit_subsystem: two-qubit initial state required");
  if (n_steps < 0) throw ConfigError("simulate_circuit_subsystem: n_steps must be non-negative");
  PauliBasis basis(2);
  Trajectory traj;
  traj.initial = coherence_from_density(sub_init, basis);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(sub_init.matrix());
  const auto diag = ring_phase_diagonal(p.n_qubits, p.phi_nn);
  const int a = p.subsystem_first, b = p.subsystem_second();
  std::vector<CMatrix> reduced(static_cast<std::size_t>(n_steps), CMatrix::Zero(4, 4));
  for (int k = 0; k < 4; ++k) {
    const double w = es.eigenvalues()[k];
    if (w < 1e-14) continue;
    CircuitState psi(p.n_qubits);
    psi.set_pair_product(a, b, es.eigenvectors().col(k));
    for (int t = 0; t < n_steps; ++t) {
      circuit_step(psi, p, diag);
      if (std::abs(psi.norm() - 1.0) > 1e-10) throw NumericalError("simulate_circuit_subsystem: norm drift");
      reduced[static_cast<std::size_t>(t)] += w * psi.reduced_pair(a, b);
    }
  }
  for (int t = 1; t <= n_steps; ++t) {
    CMatrix m = reduced[static_cast<std::size_t>(t - 1)];
    m /= m.trace().real();
    traj.times.push_back(t);
    traj.states.push_back(coherence_from_density(DensityMatrix(m), basis));
  }
  return traj;
}

}  // namespace qchan
