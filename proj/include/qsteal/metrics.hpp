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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsteal/common.hpp"

namespace qsteal {

struct HybridModel;
struct LabeledDataset;
struct DeviceProfile;
struct MeasurementMode;

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(const Vector& v);

/// Non-negative entries summing to 1 within `tol`.
bool is_distribution(const Vector& p, double tol = 1e-9);

/// Total variation distance 0.5 * sum |p_i - q_i|.
double tvd(const Vector& p, const Vector& q);

double mismatch_rate(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

double clone_ratio(double clone_accuracy, double victim_accuracy);

/// Argmax accuracy of `model` on `ds` under `profile`.
double accuracy(const HybridModel& model, const LabeledDataset& ds, const DeviceProfile& profile,
                MeasurementMode mode, std::uint64_t seed = 0);

struct MetricRecord {
  std::string name;
  double value = 0;
  std::string experiment;
  std::vector<std::uint64_t> seeds;
  std::size_t shots = 0;  // 0 = analytic
};

nlohmann::json to_json(const MetricRecord& r);

/// Frozen reference values: experiment id -> (value, tolerance).
class Expectations {
 public:
  struct Entry {
    double value = 0;
    double tolerance = 0;
  };

  static constexpr int kVersion = 1;

  static Expectations load(const std::string& path);
  static Expectations from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void save(const std::string& path) const;

  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  const Entry& at(const std::string& id) const;
  void set(const std::string& id, Entry e) { entries_[id] = e; }

  /// |value - expected| <= tolerance.
  bool matches(const std::string& id, double value) const;

  /// Checks `value` against the stored entry, or records it with
  /// `tolerance` when the id is new (first pinned run). Returns true when
  /// the value was accepted.
  bool check_or_record(const std::string& id, double value, double tolerance);

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace qsteal
