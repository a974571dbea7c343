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

#include "qsteal/circuit.hpp"

#include <algorithm>
#include <cctype>

namespace qsteal {

std::string_view name(PqcTemplateId id) {
  switch (id) {
    case PqcTemplateId::PQC1: return "PQC1";
    case PqcTemplateId::PQC6: return "PQC6";
    case PqcTemplateId::PQC17: return "PQC17";
    case PqcTemplateId::PQC19: return "PQC19";
  }
  return "?";
}

PqcTemplateId parse_template(std::string_view text) {
  std::string norm;
  for (char c : text)
    if (c != '-' && c != '_') norm.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (norm == "PQC1") return PqcTemplateId::PQC1;
  if (norm == "PQC6") return PqcTemplateId::PQC6;
  if (norm == "PQC17") return PqcTemplateId::PQC17;
  if (norm == "PQC19") return PqcTemplateId::PQC19;
  throw Error("unknown PQC template '" + std::string(text) + "'");
}

std::size_t PqcTemplate::params_per_layer() const {
  const std::size_t n = n_qubits;
  switch (id) {
    case PqcTemplateId::PQC1: return 2 * n;
    case PqcTemplateId::PQC6: return 4 * n + n * (n - 1);
    case PqcTemplateId::PQC17: return 2 * n + n / 2 + (n - 1) / 2;
    case PqcTemplateId::PQC19: return 3 * n;
  }
  return 0;
}

void PqcTemplate::validate() const {
  if (n_qubits == 0 || n_qubits > DensityMatrix<double>::kMaxQubits)
    throw Error("template qubit count must be in [1, 8]");
  if (layers == 0) throw Error("template needs at least one layer");
  if (id != PqcTemplateId::PQC1 && n_qubits < 2)
    throw Error(std::string(name(id)) + " needs at least 2 qubits");
}

std::vector<std::vector<std::size_t>> feature_blocks(std::size_t d, std::size_t n_qubits) {
  if (d == 0) throw Error("encode_angles: no features");
  if (n_qubits == 0) throw Error("encode_angles: no qubits");
  const std::size_t block = (d + n_qubits - 1) / n_qubits;
  std::vector<std::vector<std::size_t>> out(n_qubits);
  for (std::size_t f = 0; f < d; ++f) out[f / block].push_back(f);
  return out;
}

std::vector<GateOp> encode_angles(std::span<const double> features, std::size_t n_qubits) {
  const auto blocks = feature_blocks(features.size(), n_qubits);
  std::vector<GateOp> ops;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    ops.push_back({GateKind::H, {q}, std::nullopt});
    for (std::size_t i = 0; i < blocks[q].size(); ++i) {
      if (i > 0) ops.push_back({GateKind::H, {q}, std::nullopt});
      ops.push_back({GateKind::RZ, {q}, features[blocks[q][i]]});
    }
  }
  return ops;
}

std::vector<std::vector<GateOp>> build_pqc_layers(const PqcTemplate& t, std::span<const double> params) {
  t.validate();
  if (params.size() != t.param_count())
    throw Error(std::string(name(t.id)) + ": expected " + std::to_string(t.param_count()) +
                " parameters, got " + std::to_string(params.size()));
  const std::size_t n = t.n_qubits;
  std::size_t next = 0;
  std::vector<std::vector<GateOp>> layers(t.layers);
  for (auto& layer : layers) {
    auto rot = [&](GateKind k, std::size_t q) { layer.push_back({k, {q}, params[next++]}); };
    auto crx = [&](std::size_t c, std::size_t tgt) { layer.push_back({GateKind::CRX, {c, tgt}, params[next++]}); };
    auto rx_rz_all = [&] {
      for (std::size_t q = 0; q < n; ++q) {
        rot(GateKind::RX, q);
        rot(GateKind::RZ, q);
      }
    };
    rx_rz_all();
    switch (t.id) {
      case PqcTemplateId::PQC1:
        break;
      case PqcTemplateId::PQC6:
        for (std::size_t c = n; c-- > 0;)
          for (std::size_t tgt = n; tgt-- > 0;)
            if (tgt != c) crx(c, tgt);
        rx_rz_all();
        break;
      case PqcTemplateId::PQC17:
        for (std::size_t c = 1; c < n; c += 2) crx(c, c - 1);
        for (std::size_t c = 2; c < n; c += 2) crx(c, c - 1);
        break;
      case PqcTemplateId::PQC19:
        for (std::size_t i = n; i-- > 0;) crx(i, (i + 1) % n);
        break;
    }
  }
  return layers;
}

std::vector<GateOp> build_pqc(const PqcTemplate& t, std::span<const double> params) {
  std::vector<GateOp> out;
  for (auto& layer : build_pqc_layers(t, params)) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

void CircuitIR::validate() const {
  if (n_qubits == 0) throw Error("circuit has no qubits");
  if (measured_qubits.empty()) throw Error("circuit measures no qubits");
  for (std::size_t i = 0; i < measured_qubits.size(); ++i) {
    if (measured_qubits[i] >= n_qubits) throw Error("measured qubit out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (measured_qubits[i] == measured_qubits[j]) throw Error("measured qubits must be distinct");
  }
  for (const auto& step : steps) {
    if (const auto* g = std::get_if<GateOp>(&step)) qsteal::validate(*g, n_qubits);
    if (const auto* np = std::get_if<NoisePoint>(&step)) {
      for (auto q : np->qubits)
        if (q >= n_qubits) throw Error("noise point qubit out of range");
      if (!(np->rate >= 0 && np->rate <= 1)) throw Error("noise point rate out of range");
    }
  }
}

std::size_t CircuitIR::gate_count() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) {
    return std::holds_alternative<GateOp>(s);
  }));
}

std::size_t CircuitIR::channel_count() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) {
    return std::holds_alternative<NoisePoint>(s);
  }));
}

std::size_t CircuitIR::channel_count(ChannelKind kind, std::size_t arity) const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [&](const auto& s) {
    const auto* np = std::get_if<NoisePoint>(&s);
    return np && np->kind == kind && np->qubits.size() == arity;
  }));
}

CircuitIR build_model_circuit(std::span<const double> features, const PqcTemplate& t,
                              std::span<const double> params) {
  t.validate();
  CircuitIR c;
  c.n_qubits = t.n_qubits;
  for (auto& g : encode_angles(features, t.n_qubits)) c.steps.emplace_back(std::move(g));
  c.steps.emplace_back(LayerBoundary{});
  for (auto& layer : build_pqc_layers(t, params)) {
    for (auto& g : layer) c.steps.emplace_back(std::move(g));
    c.steps.emplace_back(LayerBoundary{});
  }
  for (std::size_t q = 0; q < t.n_qubits; ++q) c.measured_qubits.push_back(q);
  return c;
}

CircuitIR weave_noise(const CircuitIR& circuit, const DeviceProfile& profile) {
  if (circuit.noise_woven) throw Error("weave_noise: circuit already carries device noise");
  profile.validate();
  CircuitIR out;
  out.n_qubits = circuit.n_qubits;
  out.measured_qubits = circuit.measured_qubits;
  out.readout = profile.readout;
  out.noise_woven = true;
  for (const auto& step : circuit.steps) {
    out.steps.push_back(step);
    if (const auto* g = std::get_if<GateOp>(&step)) {
      const bool two = g->qubits.size() == 2;
      out.steps.emplace_back(NoisePoint{ChannelKind::Depolarizing, two ? profile.p2 : profile.p1, g->qubits});
    } else if (std::holds_alternative<LayerBoundary>(step)) {
      for (std::size_t q = 0; q < circuit.n_qubits; ++q) {
        out.steps.emplace_back(NoisePoint{ChannelKind::AmplitudeDamping, profile.gamma, {q}});
        out.steps.emplace_back(NoisePoint{ChannelKind::PhaseFlip, profile.p_phase, {q}});
        out.steps.emplace_back(NoisePoint{ChannelKind::BitFlip, profile.p_bit, {q}});
      }
    }
  }
  return out;
}

}  // namespace qsteal
