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

#include <string>
#include <vector>

#include "qchan/core/parallel.hpp"
#include "qchan/sim/circuit.hpp"
#include "qchan/sim/device.hpp"
#include "qchan/sim/periodic_lindblad.hpp"
#include "qchan/sim/transpose_channel.hpp"
#include "qchan/sim/two_qubit_lindblad.hpp"

namespace qchan {

/// How two-qubit product initial states are drawn.
enum class InitRecipe {
  /// Two independent Haar-random qubits.
  independent,
  /// Even indices: both qubits in the same Haar-random state; odd indices:
  /// two independent Haar-random states.
  same_or_independent,
};

inline InitRecipe parse_init_recipe(const std::string& s) {
  if (s == "independent") return InitRecipe::independent;
  if (s == "same_or_independent") return InitRecipe::same_or_independent;
  throw ConfigError("unknown initial-state recipe: " + s);
}

inline std::string to_string(InitRecipe r) {
  return r == InitRecipe::independent ? "independent" : "same_or_independent";
}

/// Stream offset separating validation initial states from training ones.
inline constexpr std::uint64_t kValidationStream = 1'000'000;

inline DensityMatrix initial_qubit_state(std::uint64_t seed, std::uint64_t index) {
  Rng rng = make_rng(seed, index);
  return haar_random_pure_qubit(rng);
}

inline DensityMatrix initial_pair_state(std::uint64_t seed, std::uint64_t index, InitRecipe recipe) {
  Rng rng = make_rng(seed, index);
  const DensityMatrix a = haar_random_pure_qubit(rng);
  if (recipe == InitRecipe::same_or_independent && index % 2 == 0) return tensor(a, a);
  return tensor(a, haar_random_pure_qubit(rng));
}

/// Generates `count` trajectories with ids/sources [0, count) by running
/// `simulate(i)`; each call owns its own RNG stream, so results do not
/// depend on the thread count.
template <typename Sim>
TrajectoryDataset generate_dataset(int n_qubits, std::size_t count, int threads, Sim&& simulate) {
  TrajectoryDataset data;
  data.n_qubits = n_qubits;
  data.trajectories.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Trajectory tr = simulate(i);
    tr.id = i;
    tr.source = i;
    data.trajectories[i] = std::move(tr);
  });
  data.validate();
  return data;
}

/// Shot-estimated dataset: one trajectory per (initial condition, subset),
/// with the exact prepared state at t = 0 and subset estimates at t_list.
inline TrajectoryDataset device_dataset_from_records(const std::vector<ShotRecord>& records, int n_subsets) {
  TrajectoryDataset data;
  data.n_qubits = 2;
  std::size_t id = 0;
  for (const auto& rec : records) {
    const auto est = estimate_coherence_from_counts(rec, n_subsets);
    for (int k = 0; k < n_subsets; ++k) {
      Trajectory tr;
      tr.id = id++;
      tr.source = rec.trajectory_id;
      tr.initial = rec.initial;
      tr.times = rec.times;
      for (const auto& per_time : est) tr.states.push_back(per_time[static_cast<std::size_t>(k)]);
      tr.provenance = Provenance::shot_estimated(k);
      data.trajectories.push_back(std::move(tr));
    }
  }
  data.validate();
  return data;
}

/// Noiseless counterpart of the device data: exact expectations of G^t.
inline Trajectory device_exact_trajectory(double v_zz, const DensityMatrix& sub_init, const std::vector<int>& t_list) {
  PauliBasis basis(2);
  int t_max = 0;
  for (int t : t_list) t_max = std::max(t_max, t);
  const auto states = device_exact_states(v_zz, sub_init, t_max);
  Trajectory tr;
  tr.initial = coherence_from_density(sub_init, basis);
  tr.times = t_list;
  for (int t : t_list) tr.states.push_back(coherence_from_density(states[static_cast<std::size_t>(t)], basis));
  return tr;
}

}  // namespace qchan
