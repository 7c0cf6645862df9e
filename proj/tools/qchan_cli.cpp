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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qchan/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace qchan::cli;
  CLI::App app{"qchan: learn quantum channels from dynamical data"};
  app.set_version_flag("--version", qchan::kVersion);
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  std::string out, data;
  std::size_t d_e = 0;
  int m = 0, threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the base seed");
    sub->add_option("--out", out, std::string("output directory (default: $") + kOutRootEnv + "/<config name>)");
    sub->add_option("--d-e", d_e, "override the environment dimension d_E")->check(CLI::PositiveNumber);
    sub->add_option("--m", m, "override the number of training trajectories M")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* sim = app.add_subcommand("simulate", "generate training and validation datasets");
  auto* trn = app.add_subcommand("train", "fit a Stinespring model to the training dataset");
  auto* evl = app.add_subcommand("evaluate", "validation error and plot-ready series");
  auto* flq = app.add_subcommand("floquet-scan", "Floquet generator existence over a parameter grid");
  auto* fzz = app.add_subcommand("fit-zz", "fit the ZZ cross-talk coupling to Pearson correlations");
  auto* rpt = app.add_subcommand("report", "summarize results in the output directory");
  for (auto* s : {sim, trn, evl, flq, fzz, rpt}) add_common(s);
  for (auto* s : {trn, evl, fzz}) s->add_option("--data", data, "input dataset (default: <out>/train.csv or validation.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  auto set = [&](CLI::App* s) {
    if (s->count("--seed")) opt.seed = seed;
    if (s->count("--out")) opt.out = out;
    if (s->count("--d-e")) opt.d_e = d_e;
    if (s->count("--m")) opt.m = m;
    if (s->count("--threads")) opt.threads = threads;
    if (s->get_option_no_throw("--data") && s->count("--data")) opt.data = data;
  };
  for (auto* s : app.get_subcommands()) set(s);

  return run_guarded([&]() -> int {
    if (*sim) return cmd_simulate(opt);
    if (*trn) return cmd_train(opt);
    if (*evl) return cmd_evaluate(opt);
    if (*flq) return cmd_floquet_scan(opt);
    if (*fzz) return cmd_fit_zz(opt);
    return cmd_report(opt);
  });
}
