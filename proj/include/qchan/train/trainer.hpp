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

#include <chrono>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qchan/core/random.hpp"
#include "qchan/train/adam.hpp"
#include "qchan/train/loss.hpp"

namespace qchan {

struct TrainConfig {
  double lr = 0.002;
  double gamma = 0.999;
  int batch_size = 128;
  int n_epochs = 400;
  std::size_t d_e = 4;
  int t_min = 1;
  int t_max = 20;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  int threads = 1;

  void validate(std::size_t d) const {
    if (!(lr > 0.0)) throw ConfigError("TrainConfig: lr must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("TrainConfig: gamma must lie in (0, 1]");
    if (batch_size < 1) throw ConfigError("TrainConfig: batch_size must be positive");
    if (n_epochs < 1) throw ConfigError("TrainConfig: n_epochs must be positive");
    if (d_e < 1 || d_e > d * d) throw ConfigError("TrainConfig: d_E must lie in [1, d²]");
    if (t_min > t_max) throw ConfigError("TrainConfig: t_min must not exceed t_max");
  }
};

/// Hyperparameter presets: default row and the two device-schedule phases.
inline TrainConfig default_train_row() { return {}; }
inline TrainConfig device_pretrain_row() {
  TrainConfig c;
  c.lr = 0.001;
  c.gamma = 1.0;
  c.batch_size = 256;
  c.n_epochs = 300;
  c.t_min = 11;
  c.t_max = 20;
  return c;
}
inline TrainConfig device_train_row() {
  TrainConfig c = device_pretrain_row();
  c.gamma = 0.98;
  return c;
}

struct TrainPhase {
  std::string name;
  TrainConfig config;
  int anchor = 0;
  double initial_loss = 0.0;
  std::vector<double> losses;  // full training-set loss after each epoch
};

struct TrainReport {
  std::vector<TrainPhase> phases;
  std::size_t sys_dim = 0;
  std::size_t env_dim = 0;
  RVector theta;
  double wall_seconds = 0.0;
  std::optional<double> validation_error;
  bool diverged = false;
  std::string message;
  int cptp_checks = 0;

  StinespringModel model() const { return StinespringModel(sys_dim, env_dim, theta); }

  std::vector<double> all_losses() const {
    std::vector<double> out;
    for (const auto& p : phases) out.insert(out.end(), p.losses.begin(), p.losses.end());
    return out;
  }
};

/// Called after every epoch with (phase index, epoch, model, epoch loss).
using EpochObserver = std::function<void(int, int, const StinespringModel&, double)>;

inline constexpr double kDivergenceLoss = 1e6;
inline constexpr int kCptpCheckInterval = 50;

inline RVector initial_params(std::size_t d, std::size_t de, std::uint64_t seed, double scale) {
  Rng rng = make_rng(seed, 0x5eed);
  std::normal_distribution<double> n01(0.0, 1.0);
  RVector theta(static_cast<Eigen::Index>(StinespringModel::param_count(d, de)));
  for (auto& x : theta) x = scale * n01(rng);
  return theta;
}

namespace detail {

/// Runs one optimization phase in place. Returns false on divergence.
inline bool run_phase(StinespringModel& model, const TrainingSet& set, const PauliBasis& basis, TrainPhase& phase,
                      int phase_index, TrainReport& report, const EpochObserver& observer) {
  const auto& cfg = phase.config;
  AdamState adam(model.params().size());
  Rng shuffle_rng = make_rng(cfg.seed, 0x5f0f + static_cast<std::uint64_t>(phase_index));
  std::vector<TrainingSet::Ref> order = set.refs();
  phase.initial_loss = loss(model, set, basis);
  for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const double lr = cfg.lr * std::pow(cfg.gamma, static_cast<double>(epoch));
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const auto stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::vector<TrainingSet::Ref> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                order.begin() + static_cast<std::ptrdiff_t>(stop));
      LossAndGradient lg;
      try {
        lg = loss_gradient(model, set, basis, batch, cfg.threads);
      } catch (const NumericalError& e) {
        report.diverged = true;
        report.message = phase.name + ": epoch " + std::to_string(epoch) + ", batch " +
                         std::to_string(start / static_cast<std::size_t>(cfg.batch_size)) + ": " + e.what();
        return false;
      }
      adam_step(adam, model.params(), lg.grad, lr);
    }
    const double epoch_loss = loss(model, set, basis);
    phase.losses.push_back(epoch_loss);
    if (!std::isfinite(epoch_loss) || epoch_loss > kDivergenceLoss) {
      report.diverged = true;
      report.message = phase.name + ": loss diverged at epoch " + std::to_string(epoch);
      return false;
    }
    if ((epoch + 1) % kCptpCheckInterval == 0 || epoch + 1 == cfg.n_epochs) {
      // KrausSet construction asserts completeness to 1e-10.
      (void)kraus_from_unitary(model);
      ++report.cptp_checks;
    }
    if (observer) observer(phase_index, epoch, model, epoch_loss);
  }
  return true;
}

inline TrainReport run_phases(const TrajectoryDataset& data, std::vector<TrainPhase> phases, const EpochObserver& observer) {
  data.validate();
  if (data.trajectories.empty()) throw DataError("train: dataset is empty");
  const auto start = std::chrono::steady_clock::now();
  const PauliBasis basis(data.n_qubits);
  const std::size_t d = basis.dim();
  const auto& first = phases.front().config;
  for (const auto& p : phases) p.config.validate(d);
  StinespringModel model(d, first.d_e, initial_params(d, first.d_e, first.seed, first.init_scale));
  TrainReport report;
  report.sys_dim = d;
  report.env_dim = first.d_e;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    auto& ph = phases[i];
    const TrainingSet set(data, ph.config.t_min, ph.config.t_max, ph.anchor);
    report.phases.push_back(ph);
    const bool ok = run_phase(model, set, basis, report.phases.back(), static_cast<int>(i), report, observer);
    if (!ok) break;
  }
  report.theta = model.params();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace detail

/// Learns a Stinespring model by Adam on the squared coherence-vector loss,
/// predicting every target by propagation from the initial state.
inline TrainReport train(const TrajectoryDataset& data, const TrainConfig& cfg, const EpochObserver& observer = {}) {
  return detail::run_phases(data, {TrainPhase{"train", cfg, 0, 0.0, {}}}, observer);
}

/// Two-phase schedule for shot data: phase 1 anchors predictions at the
/// estimated state at `pre_anchor`; phase 2 continues from the phase-1
/// parameters with a fresh optimizer, anchored at the known initial state.
inline TrainReport pretrain_then_train(const TrajectoryDataset& data, TrainConfig pre, TrainConfig main,
                                       int pre_anchor = 10, const EpochObserver& observer = {}) {
  main.d_e = pre.d_e;
  main.seed = pre.seed;
  return detail::run_phases(data, {TrainPhase{"pretrain", pre, pre_anchor, 0.0, {}}, TrainPhase{"train", main, 0, 0.0, {}}},
                            observer);
}

}  // namespace qchan
