// Copyright 2026 The qsteal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsteal/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qsteal: model extraction and noise-based defenses for hybrid quantum classifiers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;

  auto add_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed-override", seed_override, "run this single seed instead of the config's list");
  };
  auto* train = app.add_subcommand("train-victim", "train victim model(s) and write checkpoints");
  auto* attack = app.add_subcommand("attack", "query the victim and train clone(s)");
  auto* defend = app.add_subcommand("defend-eval", "obfuscation and paired attack under a defense policy");
  auto* report = app.add_subcommand("report", "aggregate results under the output directory");
  for (auto* c : {train, attack, defend, report}) add_flags(c);

  CLI11_PARSE(app, argc, argv);

  qsteal::ExperimentConfig cfg;
  try {
    cfg = qsteal::load_config(config_path);
    if (seed_override) cfg.seeds = {*seed_override};
  } catch (const std::exception& e) {
    std::cerr << "qsteal: invalid config: " << e.what() << '\n';
    return 2;
  }

  qsteal::RunContext run{out_dir, &std::cerr, {}};
  try {
    if (*train)
      qsteal::cmd_train_victim(cfg, run);
    else if (*attack)
      qsteal::cmd_attack(cfg, run);
    else if (*defend)
      qsteal::cmd_defend_eval(cfg, run);
    else
      qsteal::cmd_report(cfg, run);
  } catch (const std::exception& e) {
    std::cerr << "qsteal: " << e.what() << '\n';
    return 1;
  }
  for (const auto& p : run.written) std::cout << p << '\n';
  return 0;
}
