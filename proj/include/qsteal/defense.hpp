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
#include <string>
#include <vector>

#include <json.hpp>

#include "qsteal/attack.hpp"
#include "qsteal/model.hpp"

namespace qsteal {

enum class DefenseKind { None, HVIP, HAVIP };

std::string_view name(DefenseKind k);
DefenseKind parse_defense(std::string_view text);

/// One servable (model, device) pair.
struct ServedModel {
  HybridModel model;
  DeviceProfile device;
};

/// None serves one pair. HVIP serves one model on two or more devices.
/// HAVIP serves two or more (model, device) pairs.
struct DefensePolicy {
  DefenseKind kind = DefenseKind::None;
  std::vector<ServedModel> branches;
  std::vector<double> weights;

  void validate(const std::string& path = "defense") const;
  std::size_t classes() const { return branches.front().model.classes(); }

  static DefensePolicy none(const HybridModel& m, const DeviceProfile& device);
  /// Equal weights when `weights` is empty.
  static DefensePolicy hvip(const HybridModel& m, const std::vector<DeviceProfile>& devices,
                            std::vector<double> weights = {});
  static DefensePolicy havip(const std::vector<ServedModel>& pairs, std::vector<double> weights = {});
};

/// Picks a branch by `rng` and runs it.
Vector serve_query(const DefensePolicy& policy, const Vector& x, MeasurementMode mode, Rng& rng);

/// The victim endpoint. Query n uses its own selection and shot streams
/// derived from (seed, n), so answers do not depend on who else is asking.
/// The caller sees only an opaque token; which branch answered is kept in
/// `selection_log()` on the victim side.
class DefendedService final : public VictimService {
 public:
  DefendedService(DefensePolicy policy, MeasurementMode mode, std::uint64_t seed);

  VictimResponse predict(const Vector& x) override;

  const std::vector<std::size_t>& selection_log() const noexcept { return selections_; }
  const DefensePolicy& policy() const noexcept { return policy_; }

 private:
  DefensePolicy policy_;
  MeasurementMode mode_;
  std::uint64_t seed_;
  std::vector<std::size_t> selections_;
};

struct ObfuscationReport {
  double top1_mismatch_rate = 0;
  double mean_tvd = 0;
  std::vector<double> per_query;
  std::size_t shots = 0;
};

nlohmann::json to_json(const ObfuscationReport& r);

/// Defended answers against `baseline` served deterministically, per query.
ObfuscationReport measure_obfuscation(const DefensePolicy& policy, const ServedModel& baseline, const QuerySet& qs,
                                      MeasurementMode mode, std::uint64_t seed);
/// Baseline is the policy's first branch.
ObfuscationReport measure_obfuscation(const DefensePolicy& policy, const QuerySet& qs, MeasurementMode mode,
                                      std::uint64_t seed);

struct DefendedAttackResult {
  AttackReport defended;
  AttackReport undefended;
  /// defended clone accuracy minus undefended clone accuracy.
  double gap = 0;
};

nlohmann::json to_json(const DefendedAttackResult& r);

/// The same attack, with matched seeds, against the defended service and
/// against its first branch alone.
DefendedAttackResult evaluate_defended_attack(const DefensePolicy& policy, const AttackSpec& spec,
                                              const AttackContext& ctx, MeasurementMode mode, std::uint64_t seed);

}  // namespace qsteal
