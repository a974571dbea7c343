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

#include "qsteal/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qsteal {

namespace {

void check_probability(double v, const std::string& path) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw ValidationError(path, "must lie in [0, 1]");
}

Eigen::Matrix2d matrix_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(path, "expected a 2x2 matrix");
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 2) throw ValidationError(path, "expected a 2x2 matrix");
    for (int k = 0; k < 2; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw ValidationError(path, "matrix entries must be numbers");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const Eigen::Matrix2d& m) {
  return nlohmann::json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
}

double number(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ValidationError(path + "." + key, "missing");
  if (!j.at(key).is_number()) throw ValidationError(path + "." + key, "must be a number");
  return j.at(key).get<double>();
}

}  // namespace

void DeviceProfile::validate(const std::string& path) const {
  if (name.empty()) throw ValidationError(path + ".name", "must be non-empty");
  check_probability(p1, path + ".p1");
  check_probability(p2, path + ".p2");
  check_probability(gamma, path + ".gamma");
  check_probability(p_phase, path + ".p_phase");
  check_probability(p_bit, path + ".p_bit");
}

bool DeviceProfile::noiseless() const {
  return p1 == 0 && p2 == 0 && gamma == 0 && p_phase == 0 && p_bit == 0 && readout.is_identity();
}

DeviceProfile DeviceProfile::ideal() {
  DeviceProfile p;
  p.name = "ideal";
  return p;
}

void DeviceRegistry::add(DeviceProfile profile) {
  profile.validate("devices[" + std::to_string(profiles_.size()) + "]");
  if (contains(profile.name))
    throw ValidationError("devices[" + std::to_string(profiles_.size()) + "].name",
                          "duplicate device name '" + profile.name + "'");
  profiles_.push_back(std::move(profile));
}

const DeviceProfile& DeviceRegistry::get(const std::string& name) const {
  for (const auto& p : profiles_)
    if (p.name == name) return p;
  throw Error("unknown device '" + name + "'");
}

bool DeviceRegistry::contains(const std::string& name) const {
  return std::any_of(profiles_.begin(), profiles_.end(), [&](const auto& p) { return p.name == name; });
}

std::vector<std::string> DeviceRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& p : profiles_) out.push_back(p.name);
  return out;
}

DeviceRegistry DeviceRegistry::defaults() {
  DeviceRegistry r;
  r.add(DeviceProfile::ideal());

  DeviceProfile a;
  a.name = "devA";
  a.p1 = 0.001;
  a.p2 = 0.01;
  a.gamma = 0.002;
  a.p_phase = 0.002;
  a.p_bit = 0.002;
  a.readout = ReadoutConfusion({(Eigen::Matrix2d() << 0.97, 0.03, 0.05, 0.95).finished()});
  a.basis_gates = {"rz", "sx", "x", "cx"};
  r.add(a);

  DeviceProfile b;
  b.name = "devB";
  b.p1 = 0.005;
  b.p2 = 0.05;
  b.gamma = 0.01;
  b.p_phase = 0.01;
  b.p_bit = 0.01;
  b.readout = ReadoutConfusion({(Eigen::Matrix2d() << 0.93, 0.07, 0.10, 0.90).finished()});
  b.basis_gates = {"rz", "sx", "x", "ecr"};
  r.add(b);
  return r;
}

nlohmann::json to_json(const DeviceProfile& p) {
  nlohmann::json j;
  j["name"] = p.name;
  j["p1"] = p.p1;
  j["p2"] = p.p2;
  j["gamma"] = p.gamma;
  j["p_phase"] = p.p_phase;
  j["p_bit"] = p.p_bit;
  if (p.readout.broadcast()) {
    j["readout"] = matrix_to_json(p.readout.matrices().front());
  } else {
    auto list = nlohmann::json::array();
    for (const auto& m : p.readout.matrices()) list.push_back(matrix_to_json(m));
    j["readout"] = list;
  }
  if (!p.basis_gates.empty()) j["basis_gates"] = p.basis_gates;
  return j;
}

DeviceProfile profile_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  DeviceProfile p;
  if (!j.contains("name") || !j.at("name").is_string())
    throw ValidationError(path + ".name", "missing or not a string");
  p.name = j.at("name").get<std::string>();
  p.p1 = number(j, "p1", path);
  p.p2 = number(j, "p2", path);
  p.gamma = number(j, "gamma", path);
  p.p_phase = number(j, "p_phase", path);
  p.p_bit = number(j, "p_bit", path);
  if (j.contains("readout")) {
    const auto& r = j.at("readout");
    const std::string rp = path + ".readout";
    // A single matrix is [[a, b], [c, d]]; a list is [[[..],[..]], ...].
    const bool single = r.is_array() && r.size() == 2 && r[0].is_array() && !r[0].empty() &&
                        r[0][0].is_number();
    std::vector<Eigen::Matrix2d> mats;
    if (single) {
      mats.push_back(matrix_from_json(r, rp));
    } else {
      if (!r.is_array() || r.empty()) throw ValidationError(rp, "expected a matrix or a list of matrices");
      for (std::size_t q = 0; q < r.size(); ++q)
        mats.push_back(matrix_from_json(r[q], rp + "[" + std::to_string(q) + "]"));
    }
    try {
      p.readout = ReadoutConfusion(std::move(mats));
    } catch (const Error& e) {
      throw ValidationError(rp, e.what());
    }
  }
  if (j.contains("basis_gates")) {
    if (!j.at("basis_gates").is_array()) throw ValidationError(path + ".basis_gates", "expected a list");
    for (const auto& g : j.at("basis_gates")) {
      if (!g.is_string()) throw ValidationError(path + ".basis_gates", "entries must be strings");
      p.basis_gates.push_back(g.get<std::string>());
    }
  }
  p.validate(path);
  return p;
}

DeviceRegistry load_registry(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("devices") || !doc.at("devices").is_array())
    throw ValidationError("devices", "expected a top-level 'devices' list");
  DeviceRegistry r;
  const auto& list = doc.at("devices");
  for (std::size_t i = 0; i < list.size(); ++i)
    r.add(profile_from_json(list[i], "devices[" + std::to_string(i) + "]"));
  return r;
}

DeviceRegistry load_registry_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("device registry parse error: ") + e.what());
  }
  return load_registry(doc);
}

DeviceRegistry load_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open device registry '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_registry_text(ss.str());
}

nlohmann::json to_json(const DeviceRegistry& r) {
  auto list = nlohmann::json::array();
  for (const auto& p : r.profiles()) list.push_back(to_json(p));
  return {{"devices", list}};
}

void validate_weights(const std::vector<double>& weights, const std::string& path) {
  if (weights.empty()) throw ValidationError(path, "selection policy is empty");
  double total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0)
      throw ValidationError(path + "[" + std::to_string(i) + "]", "weight must be non-negative");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError(path, "weights must sum to 1");
}

std::size_t pick_index(const std::vector<double>& weights, Rng& rng) {
  validate_weights(weights, "weights");
  const double u = rng.uniform();
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // u landed in the rounding gap above the cumulative sum
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0) return i;
  return weights.size() - 1;
}

const DeviceProfile& pick_device(const DeviceRegistry& registry, const SelectionPolicy& policy, Rng& rng) {
  if (policy.weights.empty()) throw Error("selection policy is empty");
  std::vector<double> w;
  for (const auto& [n, weight] : policy.weights) {
    if (!registry.contains(n)) throw Error("unknown device '" + n + "'");
    w.push_back(weight);
  }
  return registry.get(policy.weights[pick_index(w, rng)].first);
}

}  // namespace qsteal
