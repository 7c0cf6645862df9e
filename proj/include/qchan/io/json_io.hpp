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

#include "json.hpp"
#include "qchan/core/channel.hpp"
#include "qchan/eval/error_measure.hpp"
#include "qchan/io/text.hpp"
#include "qchan/train/trainer.hpp"

namespace qchan::io {

using Json = nlohmann::json;

inline constexpr const char* kModelFormat = "qchan-model v1";

inline Json model_to_json(const StinespringModel& m) {
  Json theta = Json::array();
  for (double x : m.params()) theta.push_back(x);
  return Json{{"format", kModelFormat}, {"sys_dim", m.sys_dim()}, {"env_dim", m.env_dim()}, {"theta", theta}};
}

inline StinespringModel model_from_json(const Json& j, const std::string& path = "<model>") {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw DataError(path + ": unsupported model format");
    const auto d = j.at("sys_dim").get<std::size_t>();
    const auto de = j.at("env_dim").get<std::size_t>();
    const auto& arr = j.at("theta");
    if (!arr.is_array() || arr.size() != StinespringModel::param_count(d, de))
      throw DataError(path + ": theta has wrong length");
    RVector theta(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) theta[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return StinespringModel(d, de, theta);
  } catch (const Json::exception& e) {
    throw DataError(path + ": malformed model: " + e.what());
  }
}

/// Pretty JSON with a trailing newline; keys are sorted, so output is a pure
/// function of the value.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
}

inline void write_model(const std::string& path, const StinespringModel& m) { write_file(path, dump(model_to_json(m))); }
inline StinespringModel read_model(const std::string& path) { return model_from_json(parse_json(read_file(path), path), path); }

inline Json train_config_to_json(const TrainConfig& c) {
  return Json{{"lr", c.lr},           {"gamma", c.gamma}, {"batch_size", c.batch_size}, {"n_epochs", c.n_epochs},
              {"d_e", c.d_e},         {"t_min", c.t_min}, {"t_max", c.t_max},           {"seed", c.seed},
              {"init_scale", c.init_scale}};
}

/// Wall time is left out so that reports are reproducible byte for byte.
inline Json train_report_to_json(const TrainReport& r) {
  Json phases = Json::array();
  for (const auto& p : r.phases)
    phases.push_back(Json{{"name", p.name},
                          {"config", train_config_to_json(p.config)},
                          {"anchor", p.anchor},
                          {"initial_loss", p.initial_loss},
                          {"losses", p.losses}});
  Json j{{"sys_dim", r.sys_dim}, {"env_dim", r.env_dim}, {"phases", phases},
         {"diverged", r.diverged}, {"message", r.message}, {"cptp_checks", r.cptp_checks}};
  if (r.validation_error) j["validation_error"] = *r.validation_error;
  return j;
}

}  // namespace qchan::io
