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

#include "qsteal/metrics.hpp"

#include <cmath>

#include "qsteal/io.hpp"
#include "qsteal/train.hpp"

namespace qsteal {

std::size_t argmax(const Vector& v) {
  if (v.size() == 0) throw Error("argmax of an empty vector");
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(i);
  return best;
}

bool is_distribution(const Vector& p, double tol) {
  if (p.size() == 0 || !p.allFinite()) return false;
  if (p.minCoeff() < -tol) return false;
  return std::abs(p.sum() - 1.0) <= tol;
}

double tvd(const Vector& p, const Vector& q) {
  if (p.size() != q.size()) throw Error("tvd: size mismatch");
  if (!is_distribution(p) || !is_distribution(q)) throw Error("tvd: inputs must be probability vectors");
  return std::min(1.0, 0.5 * (p - q).cwiseAbs().sum());
}

double mismatch_rate(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) throw Error("mismatch_rate: length mismatch");
  if (a.empty()) throw Error("mismatch_rate: empty label lists");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i] ? 1 : 0;
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

double clone_ratio(double clone_accuracy, double victim_accuracy) {
  if (!(victim_accuracy > 0)) throw Error("clone_ratio: victim accuracy must be positive");
  return clone_accuracy / victim_accuracy;
}

double accuracy(const HybridModel& model, const LabeledDataset& ds, const DeviceProfile& profile,
                MeasurementMode mode, std::uint64_t seed) {
  return evaluate(model, ds, profile, mode, seed).accuracy;
}

nlohmann::json to_json(const MetricRecord& r) {
  if (!std::isfinite(r.value)) throw Error("metric '" + r.name + "' is not finite");
  nlohmann::json j = {{"name", r.name}, {"value", r.value}, {"experiment", r.experiment}, {"seeds", r.seeds}};
  if (r.shots == 0)
    j["shots"] = "analytic";
  else
    j["shots"] = r.shots;
  return j;
}

Expectations Expectations::load(const std::string& path) { return from_json(read_json(path)); }

Expectations Expectations::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("version", 0) != kVersion)
    throw ValidationError("version", "unsupported expectations document");
  Expectations e;
  if (!j.contains("entries")) return e;
  for (const auto& [id, v] : j.at("entries").items()) {
    if (!v.contains("value") || !v.contains("tolerance"))
      throw ValidationError("entries." + id, "needs value and tolerance");
    e.entries_[id] = {v.at("value").get<double>(), v.at("tolerance").get<double>()};
  }
  return e;
}

nlohmann::json Expectations::to_json() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [id, e] : entries_) entries[id] = {{"value", e.value}, {"tolerance", e.tolerance}};
  return {{"version", kVersion}, {"entries", entries}};
}

void Expectations::save(const std::string& path) const { write_json(path, to_json()); }

const Expectations::Entry& Expectations::at(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw Error("no expectation recorded for '" + id + "'");
  return it->second;
}

bool Expectations::matches(const std::string& id, double value) const {
  const auto& e = at(id);
  return std::abs(value - e.value) <= e.tolerance;
}

bool Expectations::check_or_record(const std::string& id, double value, double tolerance) {
  if (!contains(id)) {
    set(id, {value, tolerance});
    return true;
  }
  return matches(id, value);
}

}  // namespace qsteal
