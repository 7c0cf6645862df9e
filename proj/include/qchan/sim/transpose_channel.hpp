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

#include "qchan/core/channel.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// 𝓔[ρ] = (Tr[ρ]𝟙 + ρᵀ)/3 on a single qubit.
inline DensityMatrix apply_transpose_channel(const DensityMatrix& rho) {
  require_dims(rho.dim() == 2, "apply_transpose_channel: single-qubit state required");
  const CMatrix& m = rho.matrix();
  return DensityMatrix((m.trace() * CMatrix::Identity(2, 2) + m.transpose()) / 3.0);
}

/// Kraus form {𝟙, σx, σz}/√3 of the same channel (Kraus rank 3).
inline KrausSet transpose_channel_kraus() {
  PauliBasis b(1);
  const double s = 1.0 / std::sqrt(3.0);
  return KrausSet({s * b.matrix(0), s * b.matrix(1), s * b.matrix(3)});
}

inline Trajectory simulate_transpose_channel(const DensityMatrix& rho0, int n_steps) {
  PauliBasis basis(1);
  Trajectory traj;
  traj.initial = coherence_from_density(rho0, basis);
  DensityMatrix rho = rho0;
  for (int t = 1; t <= n_steps; ++t) {
    rho = apply_transpose_channel(rho);
    traj.times.push_back(t);
    traj.states.push_back(coherence_from_density(rho, basis));
  }
  return traj;
}

}  // namespace qchan
