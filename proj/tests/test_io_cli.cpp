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

#include <gtest/gtest.h>

#include <cstdlib>
#include <algorithm>
#include <cstring>
#include <random>

#include "qchan/cli/commands.hpp"
#include "qchan/io/json_io.hpp"

using namespace qchan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qchan_io_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& json) {
  const fs::path p = dir / (name + ".json");
  io::write_file(p.string(), json);
  return p;
}

cli::Options options(const fs::path& config, const fs::path& out) {
  cli::Options o;
  o.config = config.string();
  o.out = out.string();
  return o;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

io::Json load_json(const fs::path& p) { return io::parse_json(slurp(p), p.string()); }

template <typename Fn>
int guarded(Fn&& fn, std::string* err = nullptr) {
  std::ostringstream e;
  const int code = cli::run_guarded(std::forward<Fn>(fn), e);
  if (err) *err = e.str();
  return code;
}

const char* kSmoke = R"({
  "scenario": "periodic_lindblad",
  "params": {"ratio_ex": 0.5, "ratio_omega": 1.0, "gamma": 0.01},
  "M": 5, "r": 2, "T": 20,
  "train": {"n_epochs": 20, "d_e": 2},
  "seed": 11
})";

TrajectoryDataset sample_dataset() {
  TrajectoryDataset d;
  d.n_qubits = 2;
  const PauliBasis b(2);
  for (std::uint64_t i = 0; i < 3; ++i) {
    Trajectory tr = simulate_two_qubit_lindblad(TwoQubitLindbladParams{}, initial_pair_state(4, i, InitRecipe::independent), 4);
    tr.id = i + 10;
    tr.source = i;
    d.trajectories.push_back(tr);
  }
  return d;
}

std::vector<ShotRecord> sample_records() {
  std::vector<ShotRecord> recs;
  for (std::uint64_t i = 0; i < 2; ++i) {
    auto r = emulate_device(DeviceParams{-0.002, 1000, 4}, initial_pair_state(5, i, InitRecipe::independent), {10, 11, 12},
                            i + 3);
    r.trajectory_id = i;
    recs.push_back(std::move(r));
  }
  return recs;
}

}  // namespace

// ---------------------------------------------------------------- text / CSV

TEST(Text, DoubleRoundTripIsExact) {
  Rng rng = make_rng(1, 0);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 1000; ++i) {
    const double x = n01(rng) * std::pow(10.0, static_cast<double>(i % 40 - 20));
    const double y = io::parse_double(io::format_double(x), "x");
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0) << io::format_double(x);
  }
  EXPECT_THROW(io::parse_double("1.5x", "f:3"), DataError);
  EXPECT_THROW(io::parse_double("", "f:3"), DataError);
}

TEST(DatasetCsv, WriteReadWriteIsByteIdentical) {
  const auto d = sample_dataset();
  const std::string a = io::dataset_to_csv(d);
  const auto back = io::dataset_from_csv(a);
  EXPECT_EQ(io::dataset_to_csv(back), a);
  ASSERT_EQ(back.trajectories.size(), 3u);
  EXPECT_EQ(back.trajectories[1].id, 11u);
  EXPECT_EQ(back.trajectories[1].times, d.trajectories[1].times);
  EXPECT_TRUE(back.trajectories[2].states[3].values() == d.trajectories[2].states[3].values());
  EXPECT_TRUE(back.trajectories[0].initial.values() == d.trajectories[0].initial.values());
}

TEST(DatasetCsv, ShotProvenanceRoundTrip) {
  const auto d = device_dataset_from_records(sample_records(), 4);
  const std::string a = io::dataset_to_csv(d);
  EXPECT_NE(a.find("# provenance=shot_estimated"), std::string::npos);
  const auto back = io::dataset_from_csv(a);
  EXPECT_TRUE(back.shot_estimated());
  EXPECT_EQ(back.trajectories[5].provenance, Provenance::shot_estimated(1));
  EXPECT_EQ(back.trajectories[5].source, 1u);
  EXPECT_EQ(io::dataset_to_csv(back), a);
}

TEST(DatasetCsv, CorruptRowNamesLine) {
  std::string text = io::dataset_to_csv(sample_dataset());
  // Break the value on the 9th line (first data row after the headers).
  std::size_t pos = 0;
  for (int i = 0; i < 9; ++i) pos = text.find('\n', pos) + 1;
  const auto comma = text.find(',', text.find(',', pos) + 1);
  text.insert(comma + 1, "abc");
  try {
    io::dataset_from_csv(text, "train.csv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("train.csv:10"), std::string::npos) << e.what();
  }
}

TEST(DatasetCsv, StructuralErrors) {
  const std::string good = io::dataset_to_csv(sample_dataset());
  EXPECT_THROW(io::dataset_from_csv("hello\n"), DataError);
  std::string short_row = good;
  short_row.erase(short_row.rfind(','), short_row.size() - short_row.rfind(',') - 1);
  EXPECT_THROW(io::dataset_from_csv(short_row), DataError);
  std::string bad_d = good;
  bad_d.replace(bad_d.find("# d=4"), 5, "# d=3");
  EXPECT_THROW(io::dataset_from_csv(bad_d), DataError);
}

TEST(ShotsCsv, WriteReadWriteIsByteIdentical) {
  const auto recs = sample_records();
  const std::string a = io::shots_to_csv(recs);
  const auto back = io::shots_from_csv(a);
  EXPECT_EQ(io::shots_to_csv(back), a);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].times, recs[1].times);
  EXPECT_EQ(back[1].counts[2][7].blocks, recs[1].counts[2][7].blocks);
  EXPECT_TRUE(back[0].initial.values() == recs[0].initial.values());
}

TEST(ShotsCsv, CorruptCountNamesLine) {
  std::string text = io::shots_to_csv(sample_records());
  const auto pos = text.find("\n0,10,XX,");
  ASSERT_NE(pos, std::string::npos);
  const std::size_t line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n')) + 2;
  text.insert(text.find(',', pos + 9) + 3, "x");
  try {
    io::shots_from_csv(text, "s.csv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("s.csv:" + std::to_string(line)), std::string::npos) << e.what();
  }
}

TEST(ModelJson, RoundTripIsExact) {
  Rng rng = make_rng(2, 0);
  std::normal_distribution<double> n01;
  RVector th(static_cast<Eigen::Index>(StinespringModel::param_count(4, 2)));
  for (auto& x : th) x = n01(rng);
  const StinespringModel m(4, 2, th);
  const auto back = io::model_from_json(io::parse_json(io::dump(io::model_to_json(m)), "m"));
  EXPECT_TRUE(back.params() == m.params());
  EXPECT_EQ(back.env_dim(), 2u);
  io::Json bad = io::model_to_json(m);
  bad["theta"].erase(0);
  EXPECT_THROW(io::model_from_json(bad), DataError);
}

// ---------------------------------------------------------------- config

TEST(Config, ParsesAndRoundTrips) {
  const auto c = io::config_from_json(io::parse_json(kSmoke, "c"));
  EXPECT_EQ(c.scenario, io::Scenario::periodic_lindblad);
  EXPECT_EQ(c.m, 5);
  EXPECT_EQ(c.train.d_e, 2u);
  EXPECT_EQ(c.train.lr, 0.002);
  const auto again = io::config_from_json(io::config_to_json(c));
  EXPECT_EQ(io::dump(io::config_to_json(again)), io::dump(io::config_to_json(c)));
  EXPECT_EQ(io::config_hash(again), io::config_hash(c));
}

TEST(Config, DeviceDefaults) {
  const auto c = io::config_from_json(io::parse_json(R"({"scenario": "device_emulation", "train": {"d_e": 4}})", "c"));
  EXPECT_EQ(c.train.gamma, 0.98);
  EXPECT_EQ(c.pretrain.gamma, 1.0);
  EXPECT_EQ(c.pretrain.d_e, 4u);
  EXPECT_EQ(c.train.t_min, 11);
  EXPECT_EQ(c.times().front(), 10);
  EXPECT_EQ(c.init_recipe, InitRecipe::same_or_independent);
}

TEST(Config, StrictKeysAndRanges) {
  auto parse = [](const std::string& s) { return io::config_from_json(io::parse_json(s, "c")); };
  EXPECT_THROW(parse(R"({"scenario": "periodic_lindblad", "M": 5, "bogus": 1})"), ConfigError);
  EXPECT_THROW(parse(R"({"scenario": "periodic_lindblad", "train": {"learning_rate": 0.1}})"), ConfigError);
  EXPECT_THROW(parse(R"({"scenario": "warp_drive"})"), ConfigError);
  EXPECT_THROW(parse(R"({"M": 5})"), ConfigError);
  EXPECT_THROW(parse(R"({"scenario": "periodic_lindblad", "M": "five"})"), ConfigError);
  EXPECT_THROW(parse(R"({"scenario": "periodic_lindblad", "M": 0})").validate(), ConfigError);
  EXPECT_THROW(parse(R"({"scenario": "periodic_lindblad", "train": {"t_min": 5, "t_max": 3}})").validate(), ConfigError);
  EXPECT_THROW(parse(R"({"scenario": "periodic_lindblad", "T": 10, "train": {"t_max": 12}})").validate(), ConfigError);
  const auto dir = scratch("config");
  EXPECT_THROW(io::read_config((dir / "missing.json").string()), ConfigError);
  EXPECT_THROW(io::read_config(write_config(dir, "broken", "{\"scenario\": ").string()), ConfigError);
}

TEST(Config, CheckedInExperimentsParse) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(QCHAN_EXPERIMENTS_DIR)) {
    if (e.path().extension() != ".json") continue;
    EXPECT_NO_THROW(io::read_config(e.path().string()).validate()) << e.path();
    ++n;
  }
  EXPECT_GE(n, 10);
}

// ---------------------------------------------------------------- commands

TEST(Cli, ExitCodes) {
  EXPECT_EQ(guarded([] { return 0; }), cli::kOk);
  EXPECT_EQ(guarded([]() -> int { throw ConfigError("x"); }), cli::kConfigError);
  EXPECT_EQ(guarded([]() -> int { throw DataError("x"); }), cli::kDataError);
  EXPECT_EQ(guarded([]() -> int { throw cli::Diverged("x"); }), cli::kDiverged);
  EXPECT_EQ(guarded([]() -> int { throw NumericalError("x"); }), cli::kDiverged);
  EXPECT_EQ(guarded([]() -> int { throw io::IoError("x"); }), cli::kIoError);
  EXPECT_EQ(guarded([]() -> int { throw std::runtime_error("x"); }), cli::kInternal);
  std::string err;
  EXPECT_EQ(guarded([] { return cli::cmd_simulate(cli::Options{}); }, &err), cli::kConfigError);
  EXPECT_NE(err.find("--config"), std::string::npos);
}

TEST(Cli, OutputRootFromEnvironment) {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, "smoke", kSmoke);
  cli::Options o;
  o.config = cfg.string();
  ::setenv(cli::kOutRootEnv, (dir / "root").c_str(), 1);
  EXPECT_EQ(cli::resolve(o).out, dir / "root" / "smoke");
  ::unsetenv(cli::kOutRootEnv);
  EXPECT_EQ(cli::resolve(o).out, fs::path("runs") / "smoke");
  o.out = (dir / "explicit").string();
  EXPECT_EQ(cli::resolve(o).out, dir / "explicit");
}

TEST(Cli, FlagOverrides) {
  const auto dir = scratch("flags");
  auto o = options(write_config(dir, "smoke", kSmoke), dir / "o");
  o.seed = 99;
  o.m = 7;
  o.d_e = 3;
  o.threads = 2;
  const auto ctx = cli::resolve(o);
  EXPECT_EQ(ctx.cfg.seed, 99u);
  EXPECT_EQ(ctx.cfg.train.seed, 99u);
  EXPECT_EQ(ctx.cfg.m, 7);
  EXPECT_EQ(ctx.cfg.train.d_e, 3u);
  EXPECT_EQ(ctx.cfg.train.threads, 2);
  o.d_e = 5;
  EXPECT_THROW(cli::resolve(o), ConfigError);
}

TEST(Cli, SimulatePeriodicCountsAndDeterminism) {
  const auto dir = scratch("sim");
  const auto cfg = write_config(dir, "smoke", kSmoke);
  std::ostringstream log;
  ASSERT_EQ(cli::cmd_simulate(options(cfg, dir / "a"), log), cli::kOk);
  auto threaded = options(cfg, dir / "b");
  threaded.threads = 4;
  ASSERT_EQ(cli::cmd_simulate(threaded, log), cli::kOk);
  const auto train = io::read_dataset((dir / "a" / "train.csv").string());
  const auto val = io::read_dataset((dir / "a" / "validation.csv").string());
  ASSERT_EQ(train.trajectories.size(), 5u);
  EXPECT_EQ(val.trajectories.size(), 2u);
  for (const auto& tr : train.trajectories) {
    ASSERT_EQ(tr.times.size(), 20u);
    EXPECT_EQ(tr.times.front(), 1);
    EXPECT_EQ(tr.times.back(), 20);
  }
  for (const char* f : {"train.csv", "validation.csv", "manifest.json"}) EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  // The manifest pins the bytes of every dataset file.
  const auto man = load_json(dir / "a" / "manifest.json");
  EXPECT_EQ(man["files"]["train.csv"].get<std::string>(), io::hex64(io::fnv1a(slurp(dir / "a" / "train.csv"))));
  EXPECT_EQ(man["config_hash"].get<std::string>(), io::config_hash(cli::resolve(options(cfg, dir / "a")).cfg));
  EXPECT_EQ(man["seeds"]["base"].get<std::uint64_t>(), 11u);
  auto other = options(cfg, dir / "c");
  other.seed = 12;
  ASSERT_EQ(cli::cmd_simulate(other, log), cli::kOk);
  EXPECT_NE(slurp(dir / "a" / "train.csv"), slurp(dir / "c" / "train.csv"));
}

TEST(Cli, CircuitInitialRowsAreSampledStates) {
  const auto dir = scratch("circuit");
  const auto cfg = write_config(dir, "circ", R"({
    "scenario": "circuit_subsystem",
    "params": {"n_qubits": 14, "phi_x": 0.5, "phi_nn": 1.0},
    "M": 30, "r": 1, "T": 2, "train": {"t_max": 2, "d_e": 16}, "seed": 21
  })");
  ASSERT_EQ(cli::cmd_simulate(options(cfg, dir / "o")), cli::kOk);
  const auto data = io::read_dataset((dir / "o" / "train.csv").string());
  ASSERT_EQ(data.trajectories.size(), 30u);
  const PauliBasis b(2);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto expect = coherence_from_density(initial_pair_state(21, i, InitRecipe::independent), b);
    EXPECT_TRUE(data.trajectories[i].initial.values() == expect.values()) << i;
  }
}

TEST(Cli, TrainEvaluateReportOnPeriodicData) {
  const auto dir = scratch("train");
  const auto cfg = write_config(dir, "p", R"({
    "scenario": "periodic_lindblad",
    "params": {"ratio_ex": 0.5, "ratio_omega": 1.0, "gamma": 0.01},
    "M": 5, "r": 2, "T": 20, "train": {"d_e": 4}, "seed": 3
  })");
  const auto o = options(cfg, dir / "o");
  std::ostringstream log, out;
  ASSERT_EQ(cli::cmd_simulate(o, log), cli::kOk);
  ASSERT_EQ(cli::cmd_train(o, log), cli::kOk);
  const auto rep = load_json(dir / "o" / "train_report.json");
  ASSERT_EQ(rep["phases"].size(), 1u);
  EXPECT_EQ(rep["phases"][0]["losses"].size(), 400u);
  EXPECT_EQ(rep["phases"][0]["config"]["lr"].get<double>(), 0.002);
  EXPECT_TRUE(rep.contains("validation_error"));
  const std::string model = slurp(dir / "o" / "model.json");
  ASSERT_EQ(cli::cmd_train(o, log), cli::kOk);
  EXPECT_EQ(slurp(dir / "o" / "model.json"), model);
  ASSERT_EQ(cli::cmd_evaluate(o, log), cli::kOk);
  const auto ev = load_json(dir / "o" / "eval_report.json");
  const double eps = rep["validation_error"].get<double>();
  EXPECT_NEAR(ev["epsilon"].get<double>(), eps, 1e-12 * eps);
  const std::string csv = slurp(dir / "o" / "predictions.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trajectory_id,t,observable,exact,predicted,band_lo,band_hi");
  ASSERT_EQ(cli::cmd_report(o, out, log), cli::kOk);
  EXPECT_NE(out.str().find("epsilon"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "o" / "report.json"));
}

TEST(Cli, TrainRejectsCorruptRowWithLineNumber) {
  const auto dir = scratch("corrupt");
  const auto cfg = write_config(dir, "smoke", kSmoke);
  const auto o = options(cfg, dir / "o");
  ASSERT_EQ(cli::cmd_simulate(o), cli::kOk);
  std::string text = slurp(dir / "o" / "train.csv");
  std::size_t pos = 0;
  for (int i = 0; i < 11; ++i) pos = text.find('\n', pos) + 1;
  text.insert(pos, "0,1,1,0.5\n");
  io::write_file((dir / "o" / "train.csv").string(), text);
  std::string err;
  EXPECT_EQ(guarded([&] { return cli::cmd_train(o); }, &err), cli::kDataError);
  EXPECT_NE(err.find("train.csv:12"), std::string::npos) << err;
  EXPECT_FALSE(fs::exists(dir / "o" / "model.json"));
}

TEST(Cli, EvaluatePerfectModelAndMissingTimes) {
  const auto dir = scratch("eval");
  const auto cfg = write_config(dir, "e", R"({"scenario": "periodic_lindblad", "T": 6, "train": {"t_max": 6}})");
  const auto o = options(cfg, dir / "o");
  fs::create_directories(dir / "o");
  Rng rng = make_rng(3, 0);
  std::normal_distribution<double> n01;
  RVector th(static_cast<Eigen::Index>(StinespringModel::param_count(2, 3)));
  for (auto& x : th) x = 0.4 * n01(rng);
  const StinespringModel model(2, 3, th);
  const PauliBasis b(1);
  TrajectoryDataset val;
  for (std::uint64_t i = 0; i < 3; ++i) {
    DensityMatrix rho = initial_qubit_state(8, i);
    Trajectory tr;
    tr.id = tr.source = i;
    tr.initial = coherence_from_density(rho, b);
    for (int t = 1; t <= 6; ++t) {
      rho = stinespring_apply(model.unitary(), 3, rho);
      tr.times.push_back(t);
      tr.states.push_back(coherence_from_density(rho, b));
    }
    val.trajectories.push_back(tr);
  }
  io::write_dataset((dir / "o" / "validation.csv").string(), val);
  io::write_model((dir / "o" / "model.json").string(), model);
  ASSERT_EQ(cli::cmd_evaluate(o), cli::kOk);
  EXPECT_LT(load_json(dir / "o" / "eval_report.json")["epsilon"].get<double>(), 1e-28);

  for (auto& tr : val.trajectories) {
    tr.times.resize(4);
    tr.states.resize(4);
  }
  io::write_dataset((dir / "o" / "validation.csv").string(), val);
  std::string err;
  EXPECT_EQ(guarded([&] { return cli::cmd_evaluate(o); }, &err), cli::kDataError);
  EXPECT_NE(err.find("t=5"), std::string::npos) << err;
  EXPECT_NE(err.find("t=6"), std::string::npos) << err;
}

TEST(Cli, FloquetScanEndToEnd) {
  const auto dir = scratch("floquet");
  const auto grid = write_config(dir, "grid", R"({
    "scenario": "periodic_lindblad", "params": {"gamma": 0.01},
    "floquet_scan": {"ratio_ex": [0.5, 0.25], "ratio_omega": [1.0, 3.0]}, "threads": 2
  })");
  ASSERT_EQ(cli::cmd_floquet_scan(options(grid, dir / "g")), cli::kOk);
  const std::string csv = slurp(dir / "g" / "floquet_scan.csv");
  EXPECT_NE(csv.find("\n0.5,1,exists,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\n0.25,3,absent,"), std::string::npos) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto tp = write_config(dir, "tp", R"({"scenario": "transpose_channel"})");
  ASSERT_EQ(cli::cmd_floquet_scan(options(tp, dir / "t")), cli::kOk);
  EXPECT_NE(slurp(dir / "t" / "floquet_scan.csv").find(",absent,"), std::string::npos);
  const auto bad = write_config(dir, "bad", R"({"scenario": "two_qubit_lindblad"})");
  EXPECT_EQ(guarded([&] { return cli::cmd_floquet_scan(options(bad, dir / "b")); }), cli::kConfigError);
}

TEST(Cli, FitZzEndToEnd) {
  const auto dir = scratch("fitzz");
  const auto cfg = write_config(dir, "dev", R"({"scenario": "device_emulation", "M": 30, "r": 1, "seed": 5})");
  std::vector<int> times;
  for (int t = 1; t <= 20; ++t) times.push_back(t);
  for (double v : {-0.002, 0.0}) {
    TrajectoryDataset d;
    d.n_qubits = 2;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto rho = device_exact_states(v, initial_pair_state(6, i, InitRecipe::independent), 20);
      Trajectory tr;
      tr.id = tr.source = i;
      tr.initial = coherence_from_density(rho[0], PauliBasis(2));
      tr.times = times;
      for (int t : times) tr.states.push_back(coherence_from_density(rho[static_cast<std::size_t>(t)], PauliBasis(2)));
      d.trajectories.push_back(tr);
    }
    const auto path = dir / (v == 0.0 ? "zero.csv" : "v.csv");
    io::write_dataset(path.string(), d);
    auto o = options(cfg, dir / (v == 0.0 ? "z" : "n"));
    o.data = path.string();
    ASSERT_EQ(cli::cmd_fit_zz(o), cli::kOk);
    const auto rep = load_json(dir / (v == 0.0 ? "z" : "n") / "zz_fit.json");
    EXPECT_TRUE(rep["identifiable"].get<bool>());
    EXPECT_NEAR(rep["v"].get<double>(), v, v == 0.0 ? 1e-8 : 1e-5);
  }
  const auto o = options(cfg, dir / "s");
  ASSERT_EQ(cli::cmd_simulate(o), cli::kOk);
  ASSERT_EQ(cli::cmd_fit_zz(o), cli::kOk);
  const auto rep = load_json(dir / "s" / "zz_fit.json");
  EXPECT_GT(rep["v"].get<double>(), -0.003);
  EXPECT_LT(rep["v"].get<double>(), -0.001);
}

TEST(Cli, DeviceTrainUsesTwoPhaseSchedule) {
  const auto dir = scratch("device");
  const auto cfg = write_config(dir, "dev", R"({"scenario": "device_emulation", "M": 2, "r": 1, "seed": 5, "envelope_replicates": 50})");
  const auto o = options(cfg, dir / "o");
  ASSERT_EQ(cli::cmd_simulate(o), cli::kOk);
  const auto shots = io::read_shots((dir / "o" / "train_shots.csv").string());
  ASSERT_EQ(shots.size(), 2u);
  EXPECT_EQ(io::dataset_to_csv(device_dataset_from_records(shots, 10)), slurp(dir / "o" / "train.csv"));
  ASSERT_EQ(cli::cmd_train(o), cli::kOk);
  const auto rep = load_json(dir / "o" / "train_report.json");
  ASSERT_EQ(rep["phases"].size(), 2u);
  EXPECT_EQ(rep["phases"][0]["losses"].size(), 300u);
  EXPECT_EQ(rep["phases"][1]["losses"].size(), 300u);
  EXPECT_EQ(rep["phases"][0]["anchor"].get<int>(), 10);
  ASSERT_EQ(cli::cmd_evaluate(o), cli::kOk);
  const auto ev = load_json(dir / "o" / "eval_report.json");
  EXPECT_EQ(ev["t_from"].get<int>(), 11);
  EXPECT_GT(ev["pearson_checks"].get<int>(), 0);
}

TEST(Cli, BinaryExitCodes) {
  const auto dir = scratch("binary");
  const std::string bin = QCHAN_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int st = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), cli::kConfigError);
  EXPECT_EQ(run("simulate --config " + (dir / "nope.json").string()), cli::kConfigError);
  const auto cfg = write_config(dir, "smoke", kSmoke);
  EXPECT_EQ(run("simulate --config " + cfg.string() + " --out " + (dir / "o").string()), cli::kOk);
  EXPECT_EQ(run("evaluate --config " + cfg.string() + " --out " + (dir / "o").string()), cli::kIoError);
  io::write_file((dir / "o" / "train.csv").string(), "garbage\n");
  EXPECT_EQ(run("train --config " + cfg.string() + " --out " + (dir / "o").string()), cli::kDataError);
}
