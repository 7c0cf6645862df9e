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
#include <cctype>
#include <map>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qchan/core/parallel.hpp"
#include "qchan/eval/correlations.hpp"
#include "qchan/sim/device.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// Observed Pearson coefficients of one initial condition.
struct PearsonSeries {
  DensityMatrix initial;
  std::vector<int> times;
  /// values[time index][3(α₁−1) + (α₂−1)]
  std::vector<std::array<PearsonValue, 9>> values;
};

struct ZzFitConfig {
  double v_min = -0.05;
  double v_max = 0.05;
  int grid_points = 201;
  double tolerance = 1e-9;
  int t_from = 1;
  int t_to = 20;
  /// Which of the nine (α₁, α₂) pairs enter the objective.
  std::array<bool, 9> pairs{true, true, true, true, true, true, true, true, true};
  int threads = 1;

  void validate() const {
    if (!(v_min < v_max)) throw ConfigError("fit_zz: empty search bracket");
    if (grid_points < 3) throw ConfigError("fit_zz: grid needs at least 3 points");
    if (!(tolerance > 0.0)) throw ConfigError("fit_zz: tolerance must be positive");
    if (t_from > t_to) throw ConfigError("fit_zz: t_from > t_to");
  }
};

struct ZzFitResult {
  double v = 0.0;
  double uncertainty = std::numeric_limits<double>::infinity();
  double objective = 0.0;
  double curvature = 0.0;
  std::size_t n_residuals = 0;
  bool identifiable = false;
  std::string note;
};

/// Parses a comma-separated subset such as "zz,xz"; empty means all nine.
inline std::array<bool, 9> parse_pair_subset(const std::string& spec) {
  std::array<bool, 9> out{};
  if (spec.empty() || spec == "all") {
    out.fill(true);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto end = std::min(spec.find(',', pos), spec.size());
    std::string label = spec.substr(pos, end - pos);
    for (char& c : label) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    out[static_cast<std::size_t>(PauliSetting::from_label(label).index())] = true;
    pos = end + 1;
  }
  return out;
}

/// One series per initial condition. Subset trajectories of the same source
/// are averaged, which equals the estimate from all shots pooled.
inline std::vector<PearsonSeries> pearson_series_from_dataset(const TrajectoryDataset& data) {
  require_dims(data.n_qubits == 2, "pearson series: two-qubit dataset required");
  const PauliBasis basis(2);
  std::map<std::size_t, std::vector<const Trajectory*>> groups;
  for (const auto& tr : data.trajectories) groups[tr.source].push_back(&tr);
  std::vector<PearsonSeries> out;
  for (const auto& [source, members] : groups) {
    const Trajectory& first = *members.front();
    PearsonSeries s{density_from_coherence(first.initial, basis), first.times, {}};
    for (std::size_t ti = 0; ti < first.times.size(); ++ti) {
      RVector mean = RVector::Zero(16);
      for (const Trajectory* m : members) {
        if (m->times != first.times) throw DataError("pearson series: subsets of one source disagree on times");
        mean += m->states[ti].values();
      }
      s.values.push_back(pearson_all(CoherenceVector(RVector(mean / static_cast<double>(members.size())))));
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline double zz_objective(double v, const std::vector<PearsonSeries>& data, const ZzFitConfig& cfg,
                           std::size_t* count = nullptr) {
  const CMatrix g = device_gate(v);
  const PauliBasis basis(2);
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& series : data) {
    int t_cur = 0;
    CMatrix rho = series.initial.matrix();
    for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
      const int t = series.times[ti];
      if (t < cfg.t_from || t > cfg.t_to) continue;
      if (t < t_cur) throw DataError("fit_zz: times must be increasing");
      for (; t_cur < t; ++t_cur) rho = g * rho * g.adjoint();
      const auto model = pearson_all(coherence_from_density(DensityMatrix(CMatrix(0.5 * (rho + rho.adjoint()))), basis));
      for (std::size_t k = 0; k < 9; ++k) {
        const auto& obs = series.values[ti][k];
        if (!cfg.pairs[k] || !obs.defined || !model[k].defined) continue;
        const double r = obs.value - model[k].value;
        s += r * r;
        ++n;
      }
    }
  }
  if (count) *count = n;
  return s;
}

}  // namespace detail

/// Least-squares estimate of the ZZ coupling from Pearson time series, fitted
/// jointly over all series: grid search, then golden-section refinement.
inline ZzFitResult fit_zz_coupling(const std::vector<PearsonSeries>& data, const ZzFitConfig& cfg = {}) {
  cfg.validate();
  if (data.empty()) throw DataError("fit_zz: no series");
  for (const auto& s : data) {
    require_dims(s.initial.dim() == 4, "fit_zz: two-qubit initial state required");
    if (s.values.size() != s.times.size()) throw DataError("fit_zz: series length mismatch");
    int in_range = 0;
    for (int t : s.times) in_range += (t >= cfg.t_from && t <= cfg.t_to);
    if (in_range < 5) throw DataError("fit_zz: each series needs at least 5 times in range");
  }

  const std::size_t n_grid = static_cast<std::size_t>(cfg.grid_points);
  const double step = (cfg.v_max - cfg.v_min) / static_cast<double>(n_grid - 1);
  std::vector<double> grid(n_grid);
  parallel_for(n_grid, cfg.threads, [&](std::size_t i) {
    grid[i] = detail::zz_objective(cfg.v_min + step * static_cast<double>(i), data, cfg);
  });
  ZzFitResult res;
  const auto [lo_it, hi_it] = std::minmax_element(grid.begin(), grid.end());
  const std::size_t best = static_cast<std::size_t>(lo_it - grid.begin());
  detail::zz_objective(0.0, data, cfg, &res.n_residuals);
  if (res.n_residuals < 2) {
    res.note = "unidentifiable: fewer than two defined residuals";
    return res;
  }
  if (*hi_it - *lo_it <= 1e-14 * (1.0 + *hi_it)) {
    res.note = "unidentifiable: objective flat over the search bracket";
    return res;
  }

  double a = cfg.v_min + step * static_cast<double>(best > 0 ? best - 1 : 0);
  double b = cfg.v_min + step * static_cast<double>(std::min(best + 1, n_grid - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = detail::zz_objective(c, data, cfg), fd = detail::zz_objective(d, data, cfg);
  while (b - a > cfg.tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = detail::zz_objective(c, data, cfg);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = detail::zz_objective(d, data, cfg);
    }
  }
  res.v = 0.5 * (a + b);
  res.objective = detail::zz_objective(res.v, data, cfg);

  const double h = 1e-4;
  res.curvature = (detail::zz_objective(res.v + h, data, cfg) - 2.0 * res.objective +
                   detail::zz_objective(res.v - h, data, cfg)) /
                  (h * h);
  if (!(res.curvature > 1e-12)) {
    res.note = "unidentifiable: no curvature at the minimum";
    return res;
  }
  const double s2 = res.objective / static_cast<double>(res.n_residuals - 1);
  res.uncertainty = std::sqrt(s2 / (0.5 * res.curvature));
  res.identifiable = true;
  res.note = "ok";
  return res;
}

}  // namespace qchan
