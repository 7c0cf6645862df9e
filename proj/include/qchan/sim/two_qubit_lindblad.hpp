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

#include <vector>

#include "qchan/core/channel.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// Two driven qubits interacting when both are excited:
///   H = (Ω/2)(σx₁ + σx₂) + V n₁n₂,  J₁,₂ = √γ σ⁻₁,₂,  J₃,₄ = √κ n₁,₂,
/// with σ⁻ = |0⟩⟨1| and n = |1⟩⟨1|. V, γ, κ are given in units of Ω.
struct TwoQubitLindbladParams {
  double omega = 1.0;
  double v = 0.5;
  double gamma = 0.01;
  double kappa = 0.05;

  void validate() const {
    if (!(omega > 0.0)) throw ConfigError("TwoQubitLindbladParams: omega must be positive");
    if (!(gamma >= 0.0) || !(kappa >= 0.0)) throw ConfigError("TwoQubitLindbladParams: rates must be non-negative");
  }
};

struct LindbladTerms {
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;
};

inline LindbladTerms two_qubit_lindblad_terms(const TwoQubitLindbladParams& p) {
  CMatrix sx(2, 2), sm(2, 2), n(2, 2);
  sx << 0, 1, 1, 0;
  sm << 0, 1, 0, 0;
  n << 0, 0, 0, 1;
  const CMatrix id = CMatrix::Identity(2, 2);
  auto kron = [](const CMatrix& a, const CMatrix& b) {
    CMatrix r(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return r;
  };
  const double om = p.omega;
  LindbladTerms terms;
  terms.hamiltonian = 0.5 * om * (kron(sx, id) + kron(id, sx)) + p.v * om * kron(n, n);
  terms.jumps = {std::sqrt(p.gamma * om) * kron(sm, id), std::sqrt(p.gamma * om) * kron(id, sm),
                 std::sqrt(p.kappa * om) * kron(n, id), std::sqrt(p.kappa * om) * kron(id, n)};
  return terms;
}

/// Lindbladian acting on column-stacked vec(ρ): vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
inline CMatrix vectorized_lindbladian(const LindbladTerms& terms) {
  const auto d = terms.hamiltonian.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  auto kron = [](const CMatrix& a, const CMatrix& b) {
    CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
  };
  const CMatrix& h = terms.hamiltonian;
  CMatrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& j : terms.jumps) {
    const CMatrix jdj = j.adjoint() * j;
    l += kron(j.conjugate(), j) - 0.5 * kron(id, jdj) - 0.5 * kron(jdj.transpose(), id);
  }
  return l;
}

/// One stroboscopic step e^{𝓛/Ω} as a matrix on vec(ρ).
inline CMatrix two_qubit_step_propagator(const TwoQubitLindbladParams& p) {
  p.validate();
  return expm(CMatrix(vectorized_lindbladian(two_qubit_lindblad_terms(p)) / p.omega));
}

inline Trajectory simulate_two_qubit_lindblad(const TwoQubitLindbladParams& p, const DensityMatrix& rho0, int n_steps) {
  require_dims(rho0.dim() == 4, "simulate_two_qubit_lindblad: two-qubit state required");
  if (n_steps < 0) throw ConfigError("simulate_two_qubit_lindblad: n_steps must be non-negative");
  const CMatrix prop = two_qubit_step_propagator(p);
  PauliBasis basis(2);
  Trajectory traj;
  traj.initial = coherence_from_density(rho0, basis);
  CVector vec = rho0.matrix().reshaped();
  for (int t = 1; t <= n_steps; ++t) {
    vec = prop * vec;
    CMatrix m = vec.reshaped(4, 4);
    traj.times.push_back(t);
    traj.states.push_back(coherence_from_density(DensityMatrix(m), basis));
  }
  return traj;
}

}  // namespace qchan
