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

#include "qsteal/defense.hpp"

#include <cctype>
#include <cstdio>

#include "qsteal/metrics.hpp"

namespace qsteal {

std::string_view name(DefenseKind k) {
  switch (k) {
    case DefenseKind::None: return "none";
    case DefenseKind::HVIP: return "hvip";
    case DefenseKind::HAVIP: return "havip";
  }
  return "?";
}

DefenseKind parse_defense(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "none" || s == "nodefense") return DefenseKind::None;
  if (s == "hvip") return DefenseKind::HVIP;
  if (s == "havip") return DefenseKind::HAVIP;
  throw Error("unknown defense policy '" + std::string(text) + "'");
}

void DefensePolicy::validate(const std::string& path) const {
  if (branches.empty()) throw ValidationError(path, "no (model, device) pairs");
  if (weights.size() != branches.size()) throw ValidationError(path + ".weights", "one weight per branch required");
  validate_weights(weights, path + ".weights");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string at = path + ".branches[" + std::to_string(i) + "]";
    branches[i].model.validate();
    branches[i].device.validate(at + ".device");
    if (branches[i].model.classes() != branches.front().model.classes())
      throw ValidationError(at, "class count differs from the first branch");
  }
  switch (kind) {
    case DefenseKind::None:
      if (branches.size() != 1) throw ValidationError(path, "no-defense serves exactly one pair");
      break;
    case DefenseKind::HVIP:
      if (branches.size() < 2) throw ValidationError(path, "HVIP needs at least two devices");
      for (const auto& b : branches)
        if (!identical(b.model, branches.front().model)) throw ValidationError(path, "HVIP serves a single model");
      break;
    case DefenseKind::HAVIP:
      if (branches.size() < 2) throw ValidationError(path, "HAVIP needs at least two (model, device) pairs");
      break;
  }
}

DefensePolicy DefensePolicy::none(const HybridModel& m, const DeviceProfile& device) {
  DefensePolicy p{DefenseKind::None, {{m, device}}, {1.0}};
  p.validate();
  return p;
}

namespace {
std::vector<double> equal_or(std::vector<double> w, std::size_t n) {
  if (w.empty()) w.assign(n, 1.0 / static_cast<double>(n));
  return w;
}
}  // namespace

DefensePolicy DefensePolicy::hvip(const HybridModel& m, const std::vector<DeviceProfile>& devices,
                                  std::vector<double> weights) {
  DefensePolicy p;
  p.kind = DefenseKind::HVIP;
  for (const auto& d : devices) p.branches.push_back({m, d});
  p.weights = equal_or(std::move(weights), devices.size());
  p.validate();
  return p;
}

DefensePolicy DefensePolicy::havip(const std::vector<ServedModel>& pairs, std::vector<double> weights) {
  DefensePolicy p;
  p.kind = DefenseKind::HAVIP;
  p.branches = pairs;
  p.weights = equal_or(std::move(weights), pairs.size());
  p.validate();
  return p;
}

Vector serve_query(const DefensePolicy& policy, const Vector& x, MeasurementMode mode, Rng& rng) {
  const auto& b = policy.branches[pick_index(policy.weights, rng)];
  return forward(b.model, x, b.device, mode, &rng);
}

DefendedService::DefendedService(DefensePolicy policy, MeasurementMode mode, std::uint64_t seed)
    : policy_(std::move(policy)), mode_(mode), seed_(seed) {
  policy_.validate();
}

VictimResponse DefendedService::predict(const Vector& x) {
  const std::uint64_t ordinal = selections_.size();
  Rng select = Rng(seed_).fork({tag("select"), ordinal});
  Rng shots = Rng(seed_).fork({tag("shots"), ordinal});
  const std::size_t branch = pick_index(policy_.weights, select);
  const auto& b = policy_.branches[branch];
  VictimResponse r;
  r.probs = forward(b.model, x, b.device, mode_, &shots);
  selections_.push_back(branch);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(mix_seed(seed_, {tag("log"), ordinal})));
  r.log_id = buf;
  return r;
}

nlohmann::json to_json(const ObfuscationReport& r) {
  nlohmann::json j;
  j["top1_mismatch_rate"] = r.top1_mismatch_rate;
  j["mean_tvd"] = r.mean_tvd;
  j["per_query_tvd"] = r.per_query;
  if (r.shots == 0)
    j["shots"] = "analytic";
  else
    j["shots"] = r.shots;
  return j;
}

ObfuscationReport measure_obfuscation(const DefensePolicy& policy, const ServedModel& baseline, const QuerySet& qs,
                                      MeasurementMode mode, std::uint64_t seed) {
  policy.validate();
  if (qs.size() == 0) throw Error("measure_obfuscation: empty query set");
  if (baseline.model.classes() != policy.classes())
    throw Error("measure_obfuscation: baseline and policy disagree on class count");
  DefendedService service(policy, mode, mix_seed(seed, {tag("defended")}));
  const Rng base(mix_seed(seed, {tag("baseline")}));
  ObfuscationReport r;
  r.shots = mode.shots;
  std::vector<std::size_t> a, b;
  double sum = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const Vector x = qs.row(i);
    Rng rng = base.fork({i});
    const Vector p = service.predict(x).probs;
    const Vector q = forward(baseline.model, x, baseline.device, mode, &rng);
    r.per_query.push_back(tvd(p, q));
    sum += r.per_query.back();
    a.push_back(argmax(p));
    b.push_back(argmax(q));
  }
  r.mean_tvd = sum / static_cast<double>(r.per_query.size());
  r.top1_mismatch_rate = mismatch_rate(a, b);
  return r;
}

ObfuscationReport measure_obfuscation(const DefensePolicy& policy, const QuerySet& qs, MeasurementMode mode,
                                      std::uint64_t seed) {
  policy.validate();
  return measure_obfuscation(policy, policy.branches.front(), qs, mode, seed);
}

nlohmann::json to_json(const DefendedAttackResult& r) {
  return {{"defended", to_json(r.defended)}, {"undefended", to_json(r.undefended)}, {"gap", r.gap}};
}

DefendedAttackResult evaluate_defended_attack(const DefensePolicy& policy, const AttackSpec& spec,
                                              const AttackContext& ctx, MeasurementMode mode, std::uint64_t seed) {
  policy.validate();
  const DefensePolicy plain = DefensePolicy::none(policy.branches.front().model, policy.branches.front().device);
  auto run = [&](const DefensePolicy& p) {
    DefendedService scorer(p, mode, mix_seed(seed, {tag("score")}));
    const double victim_acc = service_accuracy(scorer, ctx.test);
    DefendedService service(p, mode, mix_seed(seed, {tag("serve")}));
    AttackReport r = run_attack(service, victim_acc, spec, ctx, seed).report;
    r.cell = std::string(name(p.kind));
    return r;
  };
  DefendedAttackResult out;
  out.defended = run(policy);
  out.undefended = run(plain);
  out.gap = out.defended.clone_accuracy - out.undefended.clone_accuracy;
  return out;
}

}  // namespace qsteal
