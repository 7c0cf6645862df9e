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

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qchan/core/random.hpp"
#include "qchan/eval/correlations.hpp"
#include "qchan/sim/device.hpp"

namespace qchan {

/// Shot-noise spread of the nine Pearson estimates of a two-qubit state:
/// the standard deviation, over `replicates` resampled experiments of
/// `shots` outcomes per setting, of the estimator used on device data.
/// Replicates with an undefined coefficient are skipped for that pair.
struct PearsonEnvelope {
  std::array<double, 9> mean{};
  std::array<double, 9> stddev{};
};

inline PearsonEnvelope pearson_shot_envelope(const CoherenceVector& exact, int shots, int replicates,
                                             std::uint64_t seed) {
  require_dims(exact.size() == 16, "pearson_shot_envelope: two-qubit coherence vector required");
  if (shots < 1 || replicates < 2) throw ConfigError("pearson_shot_envelope: need shots >= 1 and replicates >= 2");
  std::array<std::array<double, 4>, kNumSettings> prob;
  for (int s = 0; s < kNumSettings; ++s) prob[static_cast<std::size_t>(s)] = setting_probabilities(exact, PauliSetting::from_index(s));
  Rng rng = make_rng(seed, 0);
  std::array<double, 9> sum{}, sum2{};
  std::array<int, 9> count{};
  for (int r = 0; r < replicates; ++r) {
    std::array<std::array<long, 4>, kNumSettings> hist{};
    for (std::size_t s = 0; s < kNumSettings; ++s) {
      // Multinomial draw as a chain of binomials.
      long left = shots;
      double mass = prob[s][0] + prob[s][1] + prob[s][2] + prob[s][3];
      for (std::size_t k = 0; k < 3; ++k) {
        const double p = mass > 0.0 ? std::clamp(prob[s][k] / mass, 0.0, 1.0) : 0.0;
        hist[s][k] = left > 0 ? std::binomial_distribution<long>(left, p)(rng) : 0;
        left -= hist[s][k];
        mass -= prob[s][k];
      }
      hist[s][3] = left;
    }
    const auto c = pearson_all(coherence_from_histograms(hist));
    for (std::size_t k = 0; k < 9; ++k) {
      if (!c[k].defined) continue;
      sum[k] += c[k].value;
      sum2[k] += c[k].value * c[k].value;
      ++count[k];
    }
  }
  PearsonEnvelope env;
  for (std::size_t k = 0; k < 9; ++k) {
    if (count[k] < 2) {
      env.stddev[k] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double n = count[k];
    env.mean[k] = sum[k] / n;
    env.stddev[k] = std::sqrt(std::max(0.0, (sum2[k] - sum[k] * sum[k] / n) / (n - 1.0)));
  }
  return env;
}

}  // namespace qchan
