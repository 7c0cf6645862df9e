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

#include "qchan/core/channel.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

struct EvalConfig {
  /// Final validation time T; errors are averaged over t = t_from..T.
  int t_final = 20;
  int t_from = 1;
  /// Predictions propagate the state at this time (0 = known initial state).
  int anchor = 0;

  void validate() const {
    if (t_final < 1) throw ConfigError("EvalConfig: T must be >= 1");
    if (t_from <= anchor || t_from > t_final) throw ConfigError("EvalConfig: need anchor < t_from <= T");
  }
};

/// v(anchor), T v, T² v, ... up to `steps` applications.
inline std::vector<RVector> propagate(const RMatrix& t, const RVector& v0, int steps) {
  std::vector<RVector> out{v0};
  for (int k = 1; k <= steps; ++k) out.push_back(t * out.back());
  return out;
}

struct ErrorReport {
  double epsilon = 0.0;
  std::vector<double> per_trajectory;
};

/// Mean over trajectories of the time-averaged Tr[(ρ_ML − ρ)²]/Tr[ρ²],
/// evaluated as |v_ML − v|²/|v|².
inline ErrorReport error_measure(const TransferMatrix& channel, const TrajectoryDataset& validation, const EvalConfig& cfg) {
  cfg.validate();
  if (validation.trajectories.empty()) throw DataError("error_measure: no validation trajectories");
  ErrorReport rep;
  std::string missing;
  for (const auto& tr : validation.trajectories) {
    const CoherenceVector* a = tr.at(cfg.anchor);
    if (a == nullptr) {
      missing += " traj " + std::to_string(tr.id) + " t=" + std::to_string(cfg.anchor) + ";";
      continue;
    }
    const auto pred = propagate(channel.matrix(), a->values(), cfg.t_final - cfg.anchor);
    double acc = 0.0;
    for (int t = cfg.t_from; t <= cfg.t_final; ++t) {
      const CoherenceVector* v = tr.at(t);
      if (v == nullptr) {
        missing += " traj " + std::to_string(tr.id) + " t=" + std::to_string(t) + ";";
        continue;
      }
      const double denom = v->values().squaredNorm();
      if (!(denom > 1e-300)) throw DataError("error_measure: zero purity in reference state");
      acc += (pred[static_cast<std::size_t>(t - cfg.anchor)] - v->values()).squaredNorm() / denom;
    }
    rep.per_trajectory.push_back(acc / static_cast<double>(cfg.t_final - cfg.t_from + 1));
  }
  if (!missing.empty()) throw DataError("error_measure: missing times:" + missing);
  double s = 0.0;
  for (double e : rep.per_trajectory) s += e;
  rep.epsilon = s / static_cast<double>(rep.per_trajectory.size());
  return rep;
}

inline ErrorReport error_measure(const StinespringModel& model, const TrajectoryDataset& validation, const EvalConfig& cfg) {
  const PauliBasis basis(validation.n_qubits);
  return error_measure(transfer_matrix(kraus_from_unitary(model), basis), validation, cfg);
}

}  // namespace qchan
