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

#include <optional>
#include <string>
#include <vector>

#include "qchan/core/state.hpp"

namespace qchan {

/// Where the states of a trajectory come from. Shot-estimated trajectories
/// carry the index of the shot subset they were averaged over; their
/// initial state is still the exactly known prepared state.
struct Provenance {
  enum class Kind { exact, shot_estimated };
  Kind kind = Kind::exact;
  int subset = -1;

  static Provenance exact() { return {}; }
  static Provenance shot_estimated(int subset_id) { return {Kind::shot_estimated, subset_id}; }

  bool is_shot() const { return kind == Kind::shot_estimated; }
  bool operator==(const Provenance&) const = default;
};

struct Trajectory {
  std::size_t id = 0;
  /// Index of the initial condition this trajectory was generated from.
  std::size_t source = 0;
  CoherenceVector initial;
  std::vector<int> times;
  std::vector<CoherenceVector> states;
  Provenance provenance;

  /// State at time t, or nullopt when not sampled. t = 0 returns `initial`.
  const CoherenceVector* at(int t) const {
    if (t == 0) return &initial;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == t) return &states[i];
    return nullptr;
  }

  void validate() const {
    if (times.size() != states.size()) throw DataError("Trajectory: times/states length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] <= times[i - 1]) throw DataError("Trajectory: times must be strictly increasing");
    if (!times.empty() && times.front() <= 0) throw DataError("Trajectory: sampled times must be positive");
    for (const auto& s : states)
      if (s.size() != initial.size()) throw DataError("Trajectory: inconsistent coherence-vector length");
  }
};

struct TrajectoryDataset {
  int n_qubits = 1;
  std::vector<Trajectory> trajectories;

  std::size_t dim() const { return std::size_t{1} << n_qubits; }

  bool shot_estimated() const {
    for (const auto& t : trajectories)
      if (t.provenance.is_shot()) return true;
    return false;
  }

  void validate() const {
    const std::size_t len = dim() * dim();
    for (const auto& t : trajectories) {
      t.validate();
      if (t.initial.size() != len) throw DataError("TrajectoryDataset: coherence vector length does not match d²");
    }
  }
};

}  // namespace qchan
