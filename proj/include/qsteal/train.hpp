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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsteal/dataset.hpp"
#include "qsteal/device.hpp"
#include "qsteal/model.hpp"
#include "qsteal/optim.hpp"

namespace qsteal {

enum class LossKind { NllTop1, KlTopK };

std::string_view name(LossKind k);
LossKind parse_loss(std::string_view text);

struct TrainConfig {
  std::size_t epochs = 25;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  LossKind loss = LossKind::NllTop1;
  double spsa_c = 0.1;
  MeasurementMode mode = MeasurementMode::exact();

  void validate(const std::string& path = "train") const;
  AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }
};

nlohmann::json to_json(const TrainConfig& c);
/// "analytic" or a positive shot count.
MeasurementMode parse_shots(const nlohmann::json& v, const std::string& path);
/// Missing keys keep their defaults.
TrainConfig train_config_from_json(const nlohmann::json& j, const std::string& path = "train");

/// Hard labels (NLL) or probability rows (KL) to fit.
struct TrainingData {
  Matrix features;
  std::vector<std::size_t> labels;
  Matrix targets;  // rows sum to 1; empty for hard labels
  std::size_t classes = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
  bool soft() const noexcept { return targets.size() > 0; }

  static TrainingData hard(const LabeledDataset& ds);
};

struct EpochRecord {
  double train_loss = 0;
  double test_accuracy = 0;
  double test_loss = 0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

nlohmann::json to_json(const EpochRecord& r);

/// Device per epoch: consecutive (profile, epoch count) segments.
class ProfileSchedule {
 public:
  ProfileSchedule() = default;
  explicit ProfileSchedule(std::vector<std::pair<DeviceProfile, std::size_t>> segments);

  static ProfileSchedule single(const DeviceProfile& p, std::size_t epochs);
  /// Most epochs on `primary`, the last fifth (at least one) on `secondary`:
  /// 20 + 5 for 25 epochs.
  static ProfileSchedule mostly(const DeviceProfile& primary, const DeviceProfile& secondary, std::size_t epochs);

  std::size_t total_epochs() const;
  const DeviceProfile& at(std::size_t epoch) const;
  const std::vector<std::pair<DeviceProfile, std::size_t>>& segments() const noexcept { return segments_; }

 private:
  std::vector<std::pair<DeviceProfile, std::size_t>> segments_;
};

struct TrainResult {
  HybridModel model;
  TrainHistory history;
};

/// Counts forward passes; tests use it to pin the cost model.
struct TrainCounters {
  std::size_t training_forwards = 0;
  std::size_t evaluation_forwards = 0;
};

/// Mean loss of `m` over rows `idx` of `data`.
double batch_loss(const HybridModel& m, const TrainingData& data, const std::vector<std::size_t>& idx,
                  LossKind loss, const DeviceProfile& profile, MeasurementMode mode, Rng* rng);

/// Mini-batch SPSA + Adam over theta ++ W ++ b. Each batch draws one
/// Rademacher perturbation and evaluates the batch loss at theta +- c*delta.
/// `test` (optional) is evaluated after every epoch. Deterministic in `seed`.
TrainResult train(const HybridModel& initial, const TrainingData& data, const LabeledDataset* test,
                  const TrainConfig& cfg, const ProfileSchedule& schedule, std::uint64_t seed,
                  TrainCounters* counters = nullptr);

/// Mean NLL and argmax accuracy on a labeled set.
struct Evaluation {
  double accuracy = 0;
  double loss = 0;
};

Evaluation evaluate(const HybridModel& m, const LabeledDataset& ds, const DeviceProfile& profile,
                    MeasurementMode mode, std::uint64_t seed);

}  // namespace qsteal
