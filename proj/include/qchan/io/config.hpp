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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qchan/eval/zz_fit.hpp"
#include "qchan/io/json_io.hpp"
#include "qchan/sim/scenarios.hpp"

namespace qchan::io {

enum class Scenario { periodic_lindblad, circuit_subsystem, two_qubit_lindblad, transpose_channel, device_emulation };

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::periodic_lindblad: return "periodic_lindblad";
    case Scenario::circuit_subsystem: return "circuit_subsystem";
    case Scenario::two_qubit_lindblad: return "two_qubit_lindblad";
    case Scenario::transpose_channel: return "transpose_channel";
    default: return "device_emulation";
  }
}

inline Scenario parse_scenario(const std::string& s) {
  for (auto c : {Scenario::periodic_lindblad, Scenario::circuit_subsystem, Scenario::two_qubit_lindblad,
                 Scenario::transpose_channel, Scenario::device_emulation})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown scenario: " + s);
}

struct ExperimentConfig {
  Scenario scenario = Scenario::periodic_lindblad;
  PeriodicLindbladParams periodic;
  CircuitParams circuit;
  TwoQubitLindbladParams two_qubit;
  DeviceParams device;
  InitRecipe init_recipe = InitRecipe::independent;
  int m = 30;
  int r = 10;
  int t_final = 20;
  TrainConfig train = default_train_row();
  /// Device data only: the anchored pre-training phase.
  TrainConfig pretrain = device_pretrain_row();
  int pre_anchor = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<double> scan_ratio_ex{0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  std::vector<double> scan_ratio_omega{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0};
  std::string zz_pairs = "all";
  double zz_v_min = -0.05;
  double zz_v_max = 0.05;
  int envelope_replicates = 400;
  int threads = 1;

  bool is_device() const { return scenario == Scenario::device_emulation; }
  int n_qubits() const {
    return scenario == Scenario::periodic_lindblad || scenario == Scenario::transpose_channel ? 1 : 2;
  }
  /// Times sampled in each trajectory.
  std::vector<int> times() const {
    std::vector<int> t;
    for (int k = is_device() ? pre_anchor : 1; k <= t_final; ++k) t.push_back(k);
    return t;
  }

  void validate() const {
    if (m < 1) throw ConfigError("config: M must be >= 1");
    if (r < 1) throw ConfigError("config: r must be >= 1");
    if (t_final < 1) throw ConfigError("config: T must be >= 1");
    if (train.t_min < 1 || train.t_min > train.t_max || train.t_max > t_final)
      throw ConfigError("config: need 1 <= t_min <= t_max <= T");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    train.validate(std::size_t{1} << n_qubits());
    if (is_device()) pretrain.validate(std::size_t{1} << n_qubits());
    switch (scenario) {
      case Scenario::periodic_lindblad: periodic.validate(); break;
      case Scenario::circuit_subsystem: circuit.validate(); break;
      case Scenario::device_emulation:
        device.validate();
        if (t_final > 20) throw ConfigError("config: device times must lie in 1..20");
        if (pre_anchor < 1 || pre_anchor >= pretrain.t_min || pretrain.t_max > t_final)
          throw ConfigError("config: need 1 <= pre_anchor < pretrain t_min, pretrain t_max <= T");
        if (pretrain.t_min < pre_anchor || train.t_min < pre_anchor)
          throw ConfigError("config: device training windows must start after the pre-training anchor");
        if (envelope_replicates < 2) throw ConfigError("config: envelope_replicates must be >= 2");
        break;
      default: break;
    }
    if (scan_ratio_ex.empty() || scan_ratio_omega.empty()) throw ConfigError("config: empty Floquet scan grid");
    (void)parse_pair_subset(zz_pairs);
  }
};

namespace detail {

/// Reads known keys from a JSON object and rejects anything else.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) throw ConfigError(ctx_ + ": expected an object");
  }
  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(ctx_ + "." + key + ": wrong type");
    }
  }
  const Json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(ctx_ + ": unknown key '" + k + "'");
  }

 private:
  const Json& j_;
  std::string ctx_;
  std::set<std::string> seen_;
};

inline void read_train(const Json& j, TrainConfig& c, const std::string& ctx) {
  ObjectReader r(j, ctx);
  r.get("lr", c.lr);
  r.get("gamma", c.gamma);
  r.get("batch_size", c.batch_size);
  r.get("n_epochs", c.n_epochs);
  r.get("d_e", c.d_e);
  r.get("t_min", c.t_min);
  r.get("t_max", c.t_max);
  r.get("init_scale", c.init_scale);
  r.finish();
}

inline Json train_json(const TrainConfig& c) {
  return Json{{"lr", c.lr},       {"gamma", c.gamma}, {"batch_size", c.batch_size}, {"n_epochs", c.n_epochs},
              {"d_e", c.d_e},     {"t_min", c.t_min}, {"t_max", c.t_max},           {"init_scale", c.init_scale}};
}

}  // namespace detail

inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  detail::ObjectReader r(j, "config");
  std::string scenario;
  r.get("scenario", scenario);
  if (scenario.empty()) throw ConfigError("config: 'scenario' is required");
  c.scenario = parse_scenario(scenario);
  if (c.is_device()) {
    c.train = device_train_row();
    c.init_recipe = InitRecipe::same_or_independent;
  }
  if (const Json* p = r.child("params")) {
    detail::ObjectReader pr(*p, "config.params");
    switch (c.scenario) {
      case Scenario::periodic_lindblad:
        pr.get("e_z", c.periodic.e_z);
        pr.get("ratio_ex", c.periodic.ratio_ex);
        pr.get("ratio_omega", c.periodic.ratio_omega);
        pr.get("gamma", c.periodic.gamma);
        break;
      case Scenario::circuit_subsystem:
        pr.get("n_qubits", c.circuit.n_qubits);
        pr.get("phi_x", c.circuit.phi_x);
        pr.get("phi_nn", c.circuit.phi_nn);
        pr.get("subsystem_first", c.circuit.subsystem_first);
        break;
      case Scenario::two_qubit_lindblad:
        pr.get("omega", c.two_qubit.omega);
        pr.get("v", c.two_qubit.v);
        pr.get("gamma", c.two_qubit.gamma);
        pr.get("kappa", c.two_qubit.kappa);
        break;
      case Scenario::device_emulation:
        pr.get("v_zz", c.device.v_zz);
        pr.get("shots_per_basis", c.device.shots_per_basis);
        pr.get("n_subsets", c.device.n_subsets);
        break;
      default: break;
    }
    pr.finish();
  }
  std::string recipe = to_string(c.init_recipe);
  r.get("init_recipe", recipe);
  c.init_recipe = parse_init_recipe(recipe);
  r.get("M", c.m);
  r.get("r", c.r);
  r.get("T", c.t_final);
  if (const Json* t = r.child("train")) detail::read_train(*t, c.train, "config.train");
  if (const Json* t = r.child("pretrain")) detail::read_train(*t, c.pretrain, "config.pretrain");
  r.get("pre_anchor", c.pre_anchor);
  r.get("seed", c.seed);
  r.get("out", c.out);
  if (const Json* s = r.child("floquet_scan")) {
    detail::ObjectReader sr(*s, "config.floquet_scan");
    sr.get("ratio_ex", c.scan_ratio_ex);
    sr.get("ratio_omega", c.scan_ratio_omega);
    sr.finish();
  }
  if (const Json* z = r.child("fit_zz")) {
    detail::ObjectReader zr(*z, "config.fit_zz");
    zr.get("pairs", c.zz_pairs);
    zr.get("v_min", c.zz_v_min);
    zr.get("v_max", c.zz_v_max);
    zr.finish();
  }
  r.get("envelope_replicates", c.envelope_replicates);
  r.get("threads", c.threads);
  r.finish();
  c.pretrain.d_e = c.train.d_e;
  return c;
}

/// Fully resolved configuration; its dump is hashed into the manifest.
inline Json config_to_json(const ExperimentConfig& c) {
  Json j{{"scenario", to_string(c.scenario)},
         {"init_recipe", to_string(c.init_recipe)},
         {"M", c.m},
         {"r", c.r},
         {"T", c.t_final},
         {"train", detail::train_json(c.train)},
         {"seed", c.seed},
         {"out", c.out},
         {"floquet_scan", Json{{"ratio_ex", c.scan_ratio_ex}, {"ratio_omega", c.scan_ratio_omega}}},
         {"fit_zz", Json{{"pairs", c.zz_pairs}, {"v_min", c.zz_v_min}, {"v_max", c.zz_v_max}}}};
  switch (c.scenario) {
    case Scenario::periodic_lindblad:
      j["params"] = Json{{"e_z", c.periodic.e_z}, {"ratio_ex", c.periodic.ratio_ex},
                         {"ratio_omega", c.periodic.ratio_omega}, {"gamma", c.periodic.gamma}};
      break;
    case Scenario::circuit_subsystem:
      j["params"] = Json{{"n_qubits", c.circuit.n_qubits}, {"phi_x", c.circuit.phi_x}, {"phi_nn", c.circuit.phi_nn},
                         {"subsystem_first", c.circuit.subsystem_first}};
      break;
    case Scenario::two_qubit_lindblad:
      j["params"] = Json{{"omega", c.two_qubit.omega}, {"v", c.two_qubit.v}, {"gamma", c.two_qubit.gamma},
                         {"kappa", c.two_qubit.kappa}};
      break;
    case Scenario::device_emulation:
      j["params"] = Json{{"v_zz", c.device.v_zz}, {"shots_per_basis", c.device.shots_per_basis},
                         {"n_subsets", c.device.n_subsets}};
      j["pretrain"] = detail::train_json(c.pretrain);
      j["pre_anchor"] = c.pre_anchor;
      j["envelope_replicates"] = c.envelope_replicates;
      break;
    default: j["params"] = Json::object(); break;
  }
  return j;
}

inline ExperimentConfig read_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    return config_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
}

/// Hash of everything that determines outputs (the output directory does not).
inline std::string config_hash(const ExperimentConfig& c) {
  Json j = config_to_json(c);
  j.erase("out");
  return hex64(fnv1a(j.dump()));
}

}  // namespace qchan::io
