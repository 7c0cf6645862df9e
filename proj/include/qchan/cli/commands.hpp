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

#include <cstdlib>
#include <filesystem>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qchan/eval/correlations.hpp"
#include "qchan/eval/error_measure.hpp"
#include "qchan/eval/floquet.hpp"
#include "qchan/eval/shot_envelope.hpp"
#include "qchan/eval/zz_fit.hpp"
#include "qchan/io/config.hpp"
#include "qchan/io/dataset_csv.hpp"
#include "qchan/io/shots_csv.hpp"
#include "qchan/version.hpp"

namespace qchan::cli {

namespace fs = std::filesystem;
using io::Json;

enum ExitCode : int { kOk = 0, kInternal = 1, kConfigError = 2, kDataError = 3, kDiverged = 4, kIoError = 5 };

/// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "QCHAN_OUT_ROOT";

/// Raised when training diverges; carries the report path for the message.
class Diverged : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> d_e;
  std::optional<int> m;
  std::optional<int> threads;
  /// Input dataset override for train / evaluate / fit-zz.
  std::optional<std::string> data;
};

struct Context {
  io::ExperimentConfig cfg;
  fs::path out;
  std::ostream* log = &std::cerr;
};

inline Context resolve(const Options& opt, std::ostream& log = std::cerr) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  Context ctx;
  ctx.log = &log;
  ctx.cfg = io::read_config(opt.config);
  auto& c = ctx.cfg;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.m) c.m = *opt.m;
  if (opt.threads) c.threads = *opt.threads;
  if (opt.d_e) c.train.d_e = c.pretrain.d_e = *opt.d_e;
  c.train.seed = c.pretrain.seed = c.seed;
  c.train.threads = c.pretrain.threads = c.threads;
  if (opt.out) {
    ctx.out = *opt.out;
  } else {
    const char* root = std::getenv(kOutRootEnv);
    const fs::path base = root && *root ? fs::path(root) : fs::path("runs");
    ctx.out = base / (c.out.empty() ? fs::path(opt.config).stem() : fs::path(c.out));
  }
  c.validate();
  return ctx;
}

namespace detail {

inline void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw io::IoError("cannot create output directory " + p.string());
}

inline std::string fmt(double x) { return io::format_double(x); }

inline DensityMatrix initial_state(const io::ExperimentConfig& c, std::uint64_t index) {
  return c.n_qubits() == 1 ? initial_qubit_state(c.seed, index) : initial_pair_state(c.seed, index, c.init_recipe);
}

inline Trajectory simulate_one(const io::ExperimentConfig& c, const DensityMatrix& rho) {
  switch (c.scenario) {
    case io::Scenario::periodic_lindblad: return integrate_periodic_lindblad(c.periodic, rho, c.t_final);
    case io::Scenario::circuit_subsystem: return simulate_circuit_subsystem(c.circuit, rho, c.t_final);
    case io::Scenario::two_qubit_lindblad: return simulate_two_qubit_lindblad(c.two_qubit, rho, c.t_final);
    case io::Scenario::transpose_channel: return simulate_transpose_channel(rho, c.t_final);
    default: throw ConfigError("simulate_one: device data is shot based");
  }
}

/// Stream offset for device shot sampling.
inline constexpr std::uint64_t kShotStream = 2'000'000;

inline std::vector<ShotRecord> device_records(const io::ExperimentConfig& c, std::uint64_t first_index, int count) {
  std::vector<ShotRecord> recs(static_cast<std::size_t>(count));
  const auto times = c.times();
  parallel_for(recs.size(), c.threads, [&](std::size_t i) {
    const std::uint64_t idx = first_index + i;
    recs[i] = emulate_device(c.device, initial_state(c, idx), times, stream_seed(c.seed, kShotStream + idx));
    recs[i].trajectory_id = i;
  });
  return recs;
}

inline TrajectoryDataset exact_dataset(const io::ExperimentConfig& c, std::uint64_t first_index, int count) {
  return generate_dataset(c.n_qubits(), static_cast<std::size_t>(count), c.threads,
                          [&](std::size_t i) { return simulate_one(c, initial_state(c, first_index + i)); });
}

inline fs::path input_dataset(const Context& ctx, const Options& opt, const char* name) {
  return opt.data ? fs::path(*opt.data) : ctx.out / name;
}

inline EvalConfig eval_config(const io::ExperimentConfig& c) {
  EvalConfig e;
  e.t_final = c.t_final;
  e.t_from = c.is_device() ? c.train.t_min : 1;
  return e;
}

}  // namespace detail

/// Writes train.csv / validation.csv (plus raw shot files for device data),
/// the resolved config and a manifest.
inline int cmd_simulate(const Options& opt, std::ostream& log = std::cerr) {
  const Context ctx = resolve(opt, log);
  const auto& c = ctx.cfg;
  detail::ensure_dir(ctx.out);
  Json files = Json::object();
  auto put = [&](const std::string& name, const std::string& content) {
    io::write_file((ctx.out / name).string(), content);
    files[name] = io::hex64(io::fnv1a(content));
  };
  if (c.is_device()) {
    const auto tr = detail::device_records(c, 0, c.m);
    const auto va = detail::device_records(c, kValidationStream, c.r);
    put("train_shots.csv", io::shots_to_csv(tr));
    put("validation_shots.csv", io::shots_to_csv(va));
    put("train.csv", io::dataset_to_csv(device_dataset_from_records(tr, c.device.n_subsets)));
    put("validation.csv", io::dataset_to_csv(device_dataset_from_records(va, c.device.n_subsets)));
  } else {
    put("train.csv", io::dataset_to_csv(detail::exact_dataset(c, 0, c.m)));
    put("validation.csv", io::dataset_to_csv(detail::exact_dataset(c, kValidationStream, c.r)));
  }
  const std::string config_text = io::dump(io::config_to_json(c));
  io::write_file((ctx.out / "config.json").string(), config_text);
  const Json manifest{{"command", "simulate"},
                      {"code_version", kVersion},
                      {"config_hash", io::config_hash(c)},
                      {"seeds", Json{{"base", c.seed},
                                     {"training_streams", Json{{"first", 0}, {"count", c.m}}},
                                     {"validation_streams", Json{{"first", kValidationStream}, {"count", c.r}}},
                                     {"shot_stream_offset", c.is_device() ? Json(detail::kShotStream) : Json()}}},
                      {"files", files}};
  io::write_file((ctx.out / "manifest.json").string(), io::dump(manifest));
  log << "simulate: " << io::to_string(c.scenario) << ", M = " << c.m << ", r = " << c.r << " -> " << ctx.out.string()
      << '\n';
  return kOk;
}

/// Trains on train.csv. Shot-estimated data selects the two-phase schedule.
inline int cmd_train(const Options& opt, std::ostream& log = std::cerr) {
  const Context ctx = resolve(opt, log);
  const auto& c = ctx.cfg;
  const auto data = io::read_dataset(detail::input_dataset(ctx, opt, "train.csv").string());
  TrainReport rep = data.shot_estimated() ? pretrain_then_train(data, c.pretrain, c.train, c.pre_anchor)
                                          : train(data, c.train);
  detail::ensure_dir(ctx.out);
  const fs::path vpath = ctx.out / "validation.csv";
  if (!rep.diverged && !opt.data && fs::exists(vpath)) {
    const auto val = io::read_dataset(vpath.string());
    rep.validation_error = error_measure(rep.model(), val, detail::eval_config(c)).epsilon;
  }
  io::write_file((ctx.out / "train_report.json").string(), io::dump(io::train_report_to_json(rep)));
  log << "train: " << (data.shot_estimated() ? "pretrain+train" : "train") << ", d_E = " << rep.env_dim << ", "
      << rep.all_losses().size() << " epochs, " << std::round(rep.wall_seconds * 10.0) / 10.0 << " s\n";
  if (rep.diverged) throw Diverged("training diverged: " + rep.message);
  io::write_model((ctx.out / "model.json").string(), rep.model());
  if (!rep.all_losses().empty()) log << "final loss " << rep.all_losses().back() << '\n';
  if (rep.validation_error) log << "validation epsilon " << *rep.validation_error << '\n';
  return kOk;
}

/// ε on validation.csv plus plot-ready series in predictions.csv.
inline int cmd_evaluate(const Options& opt, std::ostream& log = std::cerr) {
  const Context ctx = resolve(opt, log);
  const auto& c = ctx.cfg;
  const auto model = io::read_model((ctx.out / "model.json").string());
  const auto val = io::read_dataset(detail::input_dataset(ctx, opt, "validation.csv").string());
  const PauliBasis basis(val.n_qubits);
  if (model.sys_dim() != basis.dim()) throw DataError("evaluate: model and dataset dimensions differ");
  const TransferMatrix tm = transfer_matrix(kraus_from_unitary(model), basis);
  const auto ecfg = detail::eval_config(c);
  const auto err = error_measure(tm, val, ecfg);

  std::ostringstream csv;
  csv << "trajectory_id,t,observable,exact,predicted,band_lo,band_hi\n";
  auto row = [&](std::size_t id, int t, const std::string& obs, double exact, double pred, double lo, double hi) {
    csv << id << ',' << t << ',' << obs << ',' << detail::fmt(exact) << ',' << detail::fmt(pred) << ','
        << detail::fmt(lo) << ',' << detail::fmt(hi) << '\n';
  };
  Json extra = Json::object();
  if (c.is_device()) {
    // One series per initial condition: analytic curves of the generating
    // gate, learned-channel prediction, band = analytic ± 2σ of the subset
    // estimator.
    const int shots = c.device.shots_per_basis / c.device.n_subsets;
    std::size_t checks = 0, outside = 0;
    std::vector<std::size_t> seen;
    for (const auto& tr : val.trajectories) {
      if (std::find(seen.begin(), seen.end(), tr.source) != seen.end()) continue;
      seen.push_back(tr.source);
      const auto exact = device_exact_states(c.device.v_zz, density_from_coherence(tr.initial, basis), c.t_final);
      const auto pred = propagate(tm.matrix(), tr.initial.values(), c.t_final);
      for (int t = ecfg.t_from; t <= c.t_final; ++t) {
        const auto ve = coherence_from_density(exact[static_cast<std::size_t>(t)], basis);
        const CoherenceVector vp(pred[static_cast<std::size_t>(t)]);
        const auto env = pearson_shot_envelope(ve, shots, c.envelope_replicates,
                                               stream_seed(c.seed, 3'000'000 + tr.source * 64 + static_cast<std::size_t>(t)));
        const auto ce = pearson_all(ve), cp = pearson_all(vp);
        for (std::size_t k = 0; k < 9; ++k) {
          if (!ce[k].defined) continue;
          const double band = 2.0 * env.stddev[k];
          row(tr.source, t, "pearson_" + PauliSetting::from_index(static_cast<int>(k)).label(), ce[k].value,
              cp[k].value, ce[k].value - band, ce[k].value + band);
          ++checks;
          if (!cp[k].defined || std::abs(cp[k].value - ce[k].value) > band) ++outside;
        }
        row(tr.source, t, "purity", purity(ve), purity(vp), purity(ve), purity(ve));
      }
    }
    extra["pearson_checks"] = checks;
    extra["pearson_outside_2sigma"] = outside;
    extra["envelope_shots_per_setting"] = shots;
  } else {
    for (const auto& tr : val.trajectories) {
      const auto pred = propagate(tm.matrix(), tr.initial.values(), c.t_final);
      for (int t = 1; t <= c.t_final; ++t) {
        const CoherenceVector* ve = tr.at(t);
        const CoherenceVector vp(pred[static_cast<std::size_t>(t)]);
        for (std::size_t j = 1; j < basis.size(); ++j)
          row(tr.id, t, basis.label(j), (*ve)[j], vp[j], (*ve)[j], (*ve)[j]);
        row(tr.id, t, "purity", purity(*ve), purity(vp), purity(*ve), purity(*ve));
        if (val.n_qubits == 2) {
          const auto ce = pearson_all(*ve), cp = pearson_all(vp);
          for (std::size_t k = 0; k < 9; ++k)
            if (ce[k].defined && cp[k].defined)
              row(tr.id, t, "pearson_" + PauliSetting::from_index(static_cast<int>(k)).label(), ce[k].value,
                  cp[k].value, ce[k].value, ce[k].value);
        }
      }
    }
  }
  detail::ensure_dir(ctx.out);
  io::write_file((ctx.out / "predictions.csv").string(), csv.str());
  Json rep{{"epsilon", err.epsilon}, {"per_trajectory", err.per_trajectory}, {"t_from", ecfg.t_from},
           {"T", ecfg.t_final}, {"n_validation", val.trajectories.size()}};
  rep.update(extra);
  io::write_file((ctx.out / "eval_report.json").string(), io::dump(rep));
  log << "evaluate: epsilon = " << err.epsilon << '\n';
  return kOk;
}

/// Floquet verdict per grid point (periodic drive) or for the transpose
/// channel.
inline int cmd_floquet_scan(const Options& opt, std::ostream& log = std::cerr) {
  const Context ctx = resolve(opt, log);
  const auto& c = ctx.cfg;
  std::ostringstream csv;
  csv << "ratio_ex,ratio_omega,verdict,min_ccp_eigenvalue,hermiticity_defect,eigenvector_condition,"
         "reconstruction_error,note\n";
  auto line = [&](const std::string& ex, const std::string& w, const FloquetResult& f) {
    csv << ex << ',' << w << ',' << to_string(f.verdict) << ',' << detail::fmt(f.min_ccp_eigenvalue) << ','
        << detail::fmt(f.hermiticity_defect) << ',' << detail::fmt(f.eigenvector_condition) << ','
        << detail::fmt(f.reconstruction_error) << ",\"" << f.note << "\"\n";
  };
  std::size_t n_exists = 0, n_points = 0;
  if (c.scenario == io::Scenario::transpose_channel) {
    const auto f = floquet_check(transfer_matrix(transpose_channel_kraus(), PauliBasis(1)), 1.0);
    line("", "", f);
    n_points = 1;
    n_exists = f.exists();
  } else if (c.scenario == io::Scenario::periodic_lindblad) {
    struct Point {
      double ex, w;
      FloquetResult res;
      std::string error;
    };
    std::vector<Point> pts;
    for (double w : c.scan_ratio_omega)
      for (double ex : c.scan_ratio_ex) pts.push_back({ex, w, {}, {}});
    parallel_for(pts.size(), c.threads, [&](std::size_t i) {
      auto p = c.periodic;
      p.ratio_ex = pts[i].ex;
      p.ratio_omega = pts[i].w;
      try {
        pts[i].res = floquet_check(one_period_superoperator(p), p.omega());
      } catch (const Error& e) {
        pts[i].error = e.what();
      }
    });
    for (auto& pt : pts) {
      if (!pt.error.empty()) {
        pt.res.note = "integrator failure: " + pt.error;
        pt.res.verdict = FloquetVerdict::inconclusive;
      }
      line(detail::fmt(pt.ex), detail::fmt(pt.w), pt.res);
      n_exists += pt.res.exists();
    }
    n_points = pts.size();
  } else {
    throw ConfigError("floquet-scan: scenario must be periodic_lindblad or transpose_channel");
  }
  detail::ensure_dir(ctx.out);
  io::write_file((ctx.out / "floquet_scan.csv").string(), csv.str());
  log << "floquet-scan: generator exists at " << n_exists << " of " << n_points << " points\n";
  return kOk;
}

/// ZZ-coupling fit from a two-qubit dataset (shot-estimated or exact).
inline int cmd_fit_zz(const Options& opt, std::ostream& log = std::cerr) {
  const Context ctx = resolve(opt, log);
  const auto& c = ctx.cfg;
  const auto data = io::read_dataset(detail::input_dataset(ctx, opt, "train.csv").string());
  if (data.n_qubits != 2) throw DataError("fit-zz: two-qubit dataset required");
  ZzFitConfig z;
  z.v_min = c.zz_v_min;
  z.v_max = c.zz_v_max;
  z.pairs = parse_pair_subset(c.zz_pairs);
  z.t_from = 1;
  z.t_to = c.t_final;
  z.threads = c.threads;
  const auto fit = fit_zz_coupling(pearson_series_from_dataset(data), z);
  Json rep{{"v", fit.v},
           {"uncertainty", fit.identifiable ? Json(fit.uncertainty) : Json()},
           {"identifiable", fit.identifiable},
           {"objective", fit.objective},
           {"curvature", fit.curvature},
           {"n_residuals", fit.n_residuals},
           {"pairs", c.zz_pairs},
           {"note", fit.note}};
  detail::ensure_dir(ctx.out);
  io::write_file((ctx.out / "zz_fit.json").string(), io::dump(rep));
  if (fit.identifiable)
    log << "fit-zz: V = " << fit.v << " +- " << fit.uncertainty << '\n';
  else
    log << "fit-zz: " << fit.note << '\n';
  return kOk;
}

/// Collects whatever results exist in the output directory into report.json
/// and a short text summary.
inline int cmd_report(const Options& opt, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
  const Context ctx = resolve(opt, log);
  if (!fs::is_directory(ctx.out)) throw DataError("report: no output directory " + ctx.out.string());
  Json rep{{"scenario", io::to_string(ctx.cfg.scenario)}, {"config_hash", io::config_hash(ctx.cfg)},
           {"code_version", kVersion}};
  std::ostringstream txt;
  txt << "scenario " << io::to_string(ctx.cfg.scenario) << " (config " << io::config_hash(ctx.cfg) << ")\n";
  auto load = [&](const char* name) -> std::optional<Json> {
    const fs::path p = ctx.out / name;
    if (!fs::exists(p)) return std::nullopt;
    return io::parse_json(io::read_file(p.string()), p.string());
  };
  if (auto m = load("manifest.json")) {
    rep["manifest"] = *m;
    if (m->value("config_hash", "") != io::config_hash(ctx.cfg)) txt << "warning: dataset was generated from a different config\n";
  }
  if (auto t = load("train_report.json")) {
    Json s{{"diverged", (*t)["diverged"]}, {"env_dim", (*t)["env_dim"]}};
    Json phases = Json::array();
    for (const auto& p : (*t)["phases"]) {
      const auto& l = p["losses"];
      phases.push_back(Json{{"name", p["name"]}, {"epochs", l.size()}, {"initial_loss", p["initial_loss"]},
                            {"final_loss", l.empty() ? Json() : l.back()}});
      txt << "phase " << p["name"].get<std::string>() << ": " << l.size() << " epochs, loss "
          << p["initial_loss"].get<double>() << " -> " << (l.empty() ? 0.0 : l.back().get<double>()) << '\n';
    }
    s["phases"] = phases;
    if (t->contains("validation_error")) s["validation_error"] = (*t)["validation_error"];
    rep["train"] = s;
  }
  if (auto e = load("eval_report.json")) {
    rep["evaluate"] = *e;
    rep["evaluate"].erase("per_trajectory");
    txt << "epsilon " << (*e)["epsilon"].get<double>() << " over t = " << (*e)["t_from"].get<int>() << ".."
        << (*e)["T"].get<int>() << '\n';
    if (e->contains("pearson_checks"))
      txt << "pearson outside 2 sigma: " << (*e)["pearson_outside_2sigma"].get<std::size_t>() << " of "
          << (*e)["pearson_checks"].get<std::size_t>() << '\n';
  }
  if (auto z = load("zz_fit.json")) {
    rep["fit_zz"] = *z;
    txt << "V = " << (*z)["v"].get<double>();
    if ((*z)["identifiable"].get<bool>()) txt << " +- " << (*z)["uncertainty"].get<double>();
    txt << " (" << (*z)["note"].get<std::string>() << ")\n";
  }
  if (fs::exists(ctx.out / "floquet_scan.csv")) {
    const std::string scan = io::read_file((ctx.out / "floquet_scan.csv").string());
    std::size_t rows = 0, exists = 0;
    std::istringstream in(scan);
    std::string l;
    std::getline(in, l);
    while (std::getline(in, l)) {
      ++rows;
      exists += l.find(",exists,") != std::string::npos;
    }
    rep["floquet_scan"] = Json{{"points", rows}, {"exists", exists}};
    txt << "floquet generator exists at " << exists << " of " << rows << " points\n";
  }
  io::write_file((ctx.out / "report.json").string(), io::dump(rep));
  io::write_file((ctx.out / "report.txt").string(), txt.str());
  out << txt.str();
  return kOk;
}

/// Maps exceptions to exit codes; every command goes through here.
template <typename Fn>
int run_guarded(Fn&& fn, std::ostream& err = std::cerr) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Diverged& e) {
    err << "divergence: " << e.what() << '\n';
    return kDiverged;
  } catch (const NumericalError& e) {
    err << "divergence: " << e.what() << '\n';
    return kDiverged;
  } catch (const io::IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace qchan::cli
