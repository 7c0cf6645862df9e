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
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qchan/core/channel.hpp"
#include "qchan/core/random.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// Two-qubit device step G = exp{-i[(π/4)(σx⊗𝟙 + 𝟙⊗σx) + V σz⊗σz]}
/// sampled with projective shot noise in the 9 two-qubit Pauli bases.
struct DeviceParams {
  double v_zz = -0.002;
  int shots_per_basis = 20000;
  int n_subsets = 10;

  int block_size() const { return shots_per_basis / n_subsets; }

  void validate() const {
    if (n_subsets < 1) throw ConfigError("DeviceParams: n_subsets must be positive");
    if (shots_per_basis < n_subsets) throw ConfigError("DeviceParams: shots_per_basis must be >= n_subsets");
  }
};

/// Measurement setting (α₁, α₂), α ∈ {1 = x, 2 = y, 3 = z}; index 3(α₁-1) + (α₂-1).
struct PauliSetting {
  int first;
  int second;

  static PauliSetting from_index(int i) { return {1 + i / 3, 1 + i % 3}; }
  int index() const { return 3 * (first - 1) + (second - 1); }
  std::string label() const {
    static constexpr char kL[] = "IXYZ";
    return {kL[first], kL[second]};
  }
  static PauliSetting from_label(const std::string& s) {
    auto idx = [](char c) {
      switch (c) {
        case 'X': return 1;
        case 'Y': return 2;
        case 'Z': return 3;
        default: throw DataError(std::string("unknown measurement basis letter '") + c + "'");
      }
    };
    if (s.size() != 2) throw DataError("measurement basis label must have two letters: " + s);
    return {idx(s[0]), idx(s[1])};
  }
};

inline constexpr int kNumSettings = 9;

/// Outcome histograms of one (time, setting): one histogram per recorded
/// block of consecutive shots. Outcome index k = 2·[a = -1] + [b = -1].
struct SettingCounts {
  std::vector<std::array<long, 4>> blocks;
};

/// Raw shot data of one initial condition.
struct ShotRecord {
  std::size_t trajectory_id = 0;
  CoherenceVector initial;
  std::vector<int> times;
  /// counts[time index][setting index]
  std::vector<std::array<SettingCounts, kNumSettings>> counts;
};

inline CMatrix device_gate(double v_zz) {
  PauliBasis b(2);
  const CMatrix h = (std::numbers::pi / 4.0) * (b.matrix(b.index_of("XI")) + b.matrix(b.index_of("IX"))) +
                    v_zz * b.matrix(b.index_of("ZZ"));
  return expm(CMatrix(-kI * h));
}

/// Exact state G^t ρ G^{t†} for t = 0, 1, ..., t_max.
inline std::vector<DensityMatrix> device_exact_states(double v_zz, const DensityMatrix& sub_init, int t_max) {
  require_dims(sub_init.dim() == 4, "device: two-qubit state required");
  const CMatrix g = device_gate(v_zz);
  std::vector<DensityMatrix> out{sub_init};
  CMatrix rho = sub_init.matrix();
  for (int t = 1; t <= t_max; ++t) {
    rho = g * rho * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    out.emplace_back(rho);
  }
  return out;
}

/// Born probabilities of the four outcomes of `setting` from a coherence vector.
inline std::array<double, 4> setting_probabilities(const CoherenceVector& v, PauliSetting s) {
  const double e1 = v[static_cast<std::size_t>(4 * s.first)];
  const double e2 = v[static_cast<std::size_t>(s.second)];
  const double e12 = v[static_cast<std::size_t>(4 * s.first + s.second)];
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) {
    const double a = (k & 2) ? -1.0 : 1.0;
    const double b = (k & 1) ? -1.0 : 1.0;
    p[static_cast<std::size_t>(k)] = std::max(0.0, 0.25 * (1.0 + a * e1 + b * e2 + a * b * e12));
  }
  return p;
}

/// Draws shots_per_basis outcomes per setting and time, recorded as
/// n_subsets blocks of consecutive shots; the remainder of an uneven split is
/// drawn and discarded.
inline ShotRecord emulate_device(const DeviceParams& p, const DensityMatrix& sub_init, const std::vector<int>& t_list,
                                 std::uint64_t seed) {
  p.validate();
  int t_max = 0;
  for (int t : t_list) {
    if (t < 1 || t > 20) throw ConfigError("emulate_device: times must lie in 1..20");
    t_max = std::max(t_max, t);
  }
  const auto states = device_exact_states(p.v_zz, sub_init, t_max);
  PauliBasis basis(2);
  ShotRecord rec;
  rec.initial = coherence_from_density(sub_init, basis);
  rec.times = t_list;
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int block = p.block_size();
  for (int t : t_list) {
    const auto v = coherence_from_density(states[static_cast<std::size_t>(t)], basis);
    std::array<SettingCounts, kNumSettings> row;
    for (int s = 0; s < kNumSettings; ++s) {
      const auto prob = setting_probabilities(v, PauliSetting::from_index(s));
      const double c0 = prob[0], c1 = c0 + prob[1], c2 = c1 + prob[2];
      auto& blocks = row[static_cast<std::size_t>(s)].blocks;
      blocks.assign(static_cast<std::size_t>(p.n_subsets), {0, 0, 0, 0});
      for (int shot = 0; shot < p.shots_per_basis; ++shot) {
        const double x = u01(rng) * (c2 + prob[3]);
        const int k = x < c0 ? 0 : x < c1 ? 1 : x < c2 ? 2 : 3;
        const int blk = shot / block;
        if (blk < p.n_subsets) ++blocks[static_cast<std::size_t>(blk)][static_cast<std::size_t>(k)];
      }
    }
    rec.counts.push_back(row);
  }
  return rec;
}

/// Pauli expectations of one subset: two-body terms from each setting's
/// outcome products; single-qubit terms σα⊗𝟙 and 𝟙⊗σα from the diagonal
/// setting (α, α).
inline CoherenceVector coherence_from_histograms(const std::array<std::array<long, 4>, kNumSettings>& hist) {
  RVector v = RVector::Zero(16);
  v[0] = 1.0;
  for (int s = 0; s < kNumSettings; ++s) {
    const auto setting = PauliSetting::from_index(s);
    const auto& h = hist[static_cast<std::size_t>(s)];
    const double n = static_cast<double>(h[0] + h[1] + h[2] + h[3]);
    if (n <= 0.0) throw DataError("estimate_coherence_from_counts: empty subset");
    v[4 * setting.first + setting.second] = (h[0] - h[1] - h[2] + h[3]) / n;
    if (setting.first == setting.second) {
      v[4 * setting.first] = (h[0] + h[1] - h[2] - h[3]) / n;
      v[setting.second] = (h[0] - h[1] + h[2] - h[3]) / n;
    }
  }
  return CoherenceVector(std::move(v));
}

/// Subset estimates: result[time index][subset]. Recorded blocks are merged
/// in shot order into n_subsets groups of equal size; n_subsets must divide
/// the number of recorded blocks.
inline std::vector<std::vector<CoherenceVector>> estimate_coherence_from_counts(const ShotRecord& rec, int n_subsets) {
  if (n_subsets < 1) throw ConfigError("estimate_coherence_from_counts: n_subsets must be positive");
  if (rec.counts.size() != rec.times.size()) throw DataError("estimate_coherence_from_counts: missing times");
  std::vector<std::vector<CoherenceVector>> out;
  for (std::size_t ti = 0; ti < rec.times.size(); ++ti) {
    const auto& row = rec.counts[ti];
    const std::size_t n_blocks = row[0].blocks.size();
    for (int s = 0; s < kNumSettings; ++s) {
      if (row[static_cast<std::size_t>(s)].blocks.empty())
        throw DataError("estimate_coherence_from_counts: missing basis " + PauliSetting::from_index(s).label() +
                        " at t = " + std::to_string(rec.times[ti]));
      if (row[static_cast<std::size_t>(s)].blocks.size() != n_blocks)
        throw DataError("estimate_coherence_from_counts: inconsistent block counts");
    }
    if (n_blocks % static_cast<std::size_t>(n_subsets) != 0)
      throw DataError("estimate_coherence_from_counts: n_subsets must divide the recorded block count");
    const std::size_t per = n_blocks / static_cast<std::size_t>(n_subsets);
    std::vector<CoherenceVector> subsets;
    for (int k = 0; k < n_subsets; ++k) {
      std::array<std::array<long, 4>, kNumSettings> hist{};
      for (int s = 0; s < kNumSettings; ++s)
        for (std::size_t blk = k * per; blk < (k + 1) * per; ++blk)
          for (int o = 0; o < 4; ++o)
            hist[static_cast<std::size_t>(s)][static_cast<std::size_t>(o)] +=
                row[static_cast<std::size_t>(s)].blocks[blk][static_cast<std::size_t>(o)];
      subsets.push_back(coherence_from_histograms(hist));
    }
    out.push_back(std::move(subsets));
  }
  return out;
}

}  // namespace qchan
