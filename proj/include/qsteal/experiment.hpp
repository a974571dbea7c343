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

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsteal/attack.hpp"
#include "qsteal/defense.hpp"
#include "qsteal/device.hpp"
#include "qsteal/train.hpp"

namespace qsteal {

/// Where the labeled data and the out-of-domain query pools come from.
struct TaskSpec {
  std::string kind = "blobs";  // "blobs" or "csv"
  std::size_t classes = 4;
  std::size_t dim = 8;
  std::size_t per_class = 150;
  double separation = 8.0;
  std::size_t train = 400;  // 0 = 70 / 30 split
  std::string csv;
  std::vector<double> npd_separations = {3.0, 6.0, 9.0};
  std::size_t npd_per_class = 100;
  std::vector<std::string> npd_csv;

  void validate(const std::string& path = "task") const;
};

struct Task {
  TrainTestSplit data;
  std::vector<LabeledDataset> npd;
};

/// Deterministic in (spec, seed).
Task build_task(const TaskSpec& spec, std::uint64_t seed);

struct ScheduleEntry {
  std::string device;
  std::size_t epochs = 0;
};

/// A model to train and serve.
struct VictimSpec {
  PqcTemplate pqc{PqcTemplateId::PQC19, 4, 1};
  std::string device = "devA";          // serving device
  std::vector<ScheduleEntry> schedule;  // empty: every epoch on `device`
  TrainConfig train;

  void validate(const DeviceRegistry& registry, const std::string& path) const;
  ProfileSchedule profile_schedule(const DeviceRegistry& registry) const;
};

struct DefenseSpec {
  DefenseKind kind = DefenseKind::None;
  std::vector<std::string> devices = {"devA", "devB"};  // HVIP
  std::vector<VictimSpec> pairs;                        // HAVIP
  std::vector<double> weights;
  std::size_t queries = 300;

  void validate(const DeviceRegistry& registry, const std::string& path = "defense") const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  MeasurementMode mode = MeasurementMode::exact();
  DeviceRegistry registry = DeviceRegistry::defaults();
  TaskSpec task;
  VictimSpec victim;
  AttackSweep attack;
  std::string victim_checkpoint;  // may contain "{seed}"; empty: the out dir
  DefenseSpec defense;

  void validate() const;
};

/// Reads the JSON config document. Errors carry the offending field path.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Output layout and logging for one command invocation.
struct RunContext {
  std::string out_dir;
  std::ostream* log = nullptr;  // progress lines
  std::vector<std::string> written;

  void note(const std::string& line) const;
};

/// Per seed: trained victim checkpoint and its history.
void cmd_train_victim(const ExperimentConfig& cfg, RunContext& run);
/// Per seed and sweep cell: attack report; plus attack/reports.jsonl.
void cmd_attack(const ExperimentConfig& cfg, RunContext& run);
/// Per seed: obfuscation report and paired attack reports.
void cmd_defend_eval(const ExperimentConfig& cfg, RunContext& run);
/// Seed means of everything found under the out dir.
void cmd_report(const ExperimentConfig& cfg, RunContext& run);

/// Trains the victim described by `spec` on `task` for `seed`.
TrainResult train_victim(const VictimSpec& spec, const Task& task, const DeviceRegistry& registry,
                         std::uint64_t seed);

/// Victims behind `spec`, trained on `task`.
DefensePolicy build_policy(const DefenseSpec& spec, const VictimSpec& victim, const Task& task,
                           const DeviceRegistry& registry, std::uint64_t seed);

}  // namespace qsteal
