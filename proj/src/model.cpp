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

#include "qsteal/model.hpp"

#include <cmath>
#include <cstring>
#include <span>

#include "qsteal/io.hpp"

namespace qsteal {

namespace {
constexpr int kCheckpointVersion = 1;

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}
}  // namespace

Vector HybridModel::flatten() const {
  Vector flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) flat(k++) = theta(i);
  for (Eigen::Index r = 0; r < W.rows(); ++r)
    for (Eigen::Index c = 0; c < W.cols(); ++c) flat(k++) = W(r, c);
  for (Eigen::Index i = 0; i < b.size(); ++i) flat(k++) = b(i);
  return flat;
}

void HybridModel::assign(const Vector& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count())
    throw Error("parameter vector has the wrong length");
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = flat(k++);
  for (Eigen::Index r = 0; r < W.rows(); ++r)
    for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = flat(k++);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = flat(k++);
}

void HybridModel::validate() const {
  pqc.validate();
  if (static_cast<std::size_t>(theta.size()) != pqc.param_count())
    throw Error("theta length does not match the template parameter count");
  if (b.size() < 2) throw Error("model needs at least two classes");
  if (W.rows() != b.size() || static_cast<std::size_t>(W.cols()) != pqc.n_qubits)
    throw Error("head shape must be classes x n_qubits");
}

HybridModel HybridModel::init(const PqcTemplate& pqc, std::size_t classes, std::uint64_t seed) {
  pqc.validate();
  HybridModel m;
  m.pqc = pqc;
  m.seed = seed;
  Rng rng = Rng(seed).fork({tag("init")});
  m.theta.resize(static_cast<Eigen::Index>(pqc.param_count()));
  for (Eigen::Index i = 0; i < m.theta.size(); ++i) m.theta(i) = rng.uniform(0.0, kTwoPi);
  const auto k = static_cast<Eigen::Index>(classes);
  const auto n = static_cast<Eigen::Index>(pqc.n_qubits);
  m.W.resize(k, n);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m.W(r, c) = rng.uniform(-0.1, 0.1);
  m.b.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) m.b(i) = rng.uniform(-0.1, 0.1);
  m.validate();
  return m;
}

bool identical(const HybridModel& a, const HybridModel& c) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() &&
           std::memcmp(x.data(), y.data(), sizeof(double) * static_cast<std::size_t>(x.size())) == 0;
  };
  return a.pqc == c.pqc && a.seed == c.seed && same(a.theta, c.theta) && same(a.W, c.W) && same(a.b, c.b);
}

Vector softmax(const Vector& logits) {
  const double top = logits.maxCoeff();
  Vector e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

CircuitIR model_circuit(const HybridModel& m, const Vector& x, const DeviceProfile& profile) {
  const std::span<const double> features(x.data(), static_cast<std::size_t>(x.size()));
  const std::span<const double> params(m.theta.data(), static_cast<std::size_t>(m.theta.size()));
  return weave_noise(build_model_circuit(features, m.pqc, params), profile);
}

Vector quantum_features(const HybridModel& m, const Vector& x, const DeviceProfile& profile,
                        MeasurementMode mode, Rng* rng) {
  return measure_z(model_circuit(m, x, profile), mode, rng);
}

Vector forward(const HybridModel& m, const Vector& x, const DeviceProfile& profile, MeasurementMode mode,
               Rng* rng) {
  if (x.size() == 0) throw Error("forward: empty input");
  if (static_cast<std::size_t>(m.W.cols()) != m.n_qubits() || m.W.rows() != m.b.size())
    throw Error("forward: head shape mismatch");
  const Vector e = quantum_features(m, x, profile, mode, rng);
  return softmax(m.W * e + m.b);
}

nlohmann::json to_json(const HybridModel& m) {
  nlohmann::json j;
  j["format"] = "qsteal.checkpoint";
  j["version"] = kCheckpointVersion;
  j["n_qubits"] = m.pqc.n_qubits;
  j["template"] = std::string(name(m.pqc.id));
  j["layers"] = m.pqc.layers;
  j["classes"] = m.classes();
  j["theta"] = to_std(m.theta);
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.W.rows(); ++r) rows.push_back(to_std(m.W.row(r).transpose()));
  j["W"] = rows;
  j["b"] = to_std(m.b);
  j["seed"] = m.seed;
  return j;
}

HybridModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("version", 0) != kCheckpointVersion) throw ValidationError("version", "unsupported checkpoint version");
    HybridModel m;
    m.pqc.id = parse_template(j.at("template").get<std::string>());
    m.pqc.n_qubits = j.at("n_qubits").get<std::size_t>();
    m.pqc.layers = j.at("layers").get<std::size_t>();
    m.theta = from_std(j.at("theta").get<std::vector<double>>());
    const auto rows = j.at("W").get<std::vector<std::vector<double>>>();
    m.W.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.pqc.n_qubits));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.pqc.n_qubits) throw ValidationError("W", "row width must equal n_qubits");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        m.W(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    m.b = from_std(j.at("b").get<std::vector<double>>());
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("classes") && j.at("classes").get<std::size_t>() != m.classes())
      throw ValidationError("classes", "does not match the head size");
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const HybridModel& m, const std::string& path) { write_json(path, to_json(m)); }

HybridModel load_checkpoint(const std::string& path) { return model_from_json(read_json(path)); }

}  // namespace qsteal
