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
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsteal/common.hpp"
#include "qsteal/quantum/measurement.hpp"
#include "qsteal/rng.hpp"

namespace qsteal {

/// Named noise configuration of a (simulated) quantum device.
struct DeviceProfile {
  std::string name;
  double p1 = 0;       // depolarizing per 1-qubit gate
  double p2 = 0;       // depolarizing per 2-qubit gate
  double gamma = 0;    // amplitude damping per layer
  double p_phase = 0;  // phase flip per layer
  double p_bit = 0;    // bit flip per layer
  ReadoutConfusion readout;
  std::vector<std::string> basis_gates;  // informational only

  /// Throws ValidationError naming the offending field under `path`.
  void validate(const std::string& path = "device") const;

  bool noiseless() const;

  static DeviceProfile ideal();
};

/// Read-only collection of profiles with unique names.
class DeviceRegistry {
 public:
  DeviceRegistry() = default;

  void add(DeviceProfile profile);
  const DeviceProfile& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<DeviceProfile>& profiles() const noexcept { return profiles_; }
  std::vector<std::string> names() const;

  /// "ideal", "devA" and "devB".
  static DeviceRegistry defaults();

 private:
  std::vector<DeviceProfile> profiles_;
};

nlohmann::json to_json(const DeviceProfile& p);
DeviceProfile profile_from_json(const nlohmann::json& j, const std::string& path = "device");

/// Document form: {"devices": [ {...}, ... ]}.
DeviceRegistry load_registry(const nlohmann::json& doc);
DeviceRegistry load_registry_text(const std::string& text);
DeviceRegistry load_registry_file(const std::string& path);
nlohmann::json to_json(const DeviceRegistry& r);

/// Weighted choice of registered profiles.
struct SelectionPolicy {
  std::vector<std::pair<std::string, double>> weights;
};

/// Index drawn from non-negative weights summing to 1 (within 1e-9).
std::size_t pick_index(const std::vector<double>& weights, Rng& rng);

void validate_weights(const std::vector<double>& weights, const std::string& path);

const DeviceProfile& pick_device(const DeviceRegistry& registry, const SelectionPolicy& policy, Rng& rng);

}  // namespace qsteal
