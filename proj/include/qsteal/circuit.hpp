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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsteal/common.hpp"
#include "qsteal/device.hpp"
#include "qsteal/quantum/channels.hpp"
#include "qsteal/quantum/density_matrix.hpp"
#include "qsteal/quantum/gates.hpp"
#include "qsteal/quantum/measurement.hpp"
#include "qsteal/rng.hpp"

namespace qsteal {

enum class PqcTemplateId { PQC1, PQC6, PQC17, PQC19 };

std::string_view name(PqcTemplateId id);
/// Accepts "PQC1", "PQC-1", "pqc1", ...
PqcTemplateId parse_template(std::string_view text);

/// Layered ansatz from the expressibility-benchmark circuit family.
///
/// Per layer, with n qubits:
///   PQC1  - RX, RZ on every qubit.                                  2n
///   PQC6  - RX, RZ; CRX for every ordered pair; RX, RZ.             4n + n(n-1)
///   PQC17 - RX, RZ; CRX (1->0, 3->2, ...) then (2->1, 4->3, ...).   2n + floor(n/2) + floor((n-1)/2)
///   PQC19 - RX, RZ; CRX ring q_i -> q_{i+1 mod n}, i = n-1 ... 0.   3n
struct PqcTemplate {
  PqcTemplateId id = PqcTemplateId::PQC19;
  std::size_t n_qubits = 4;
  std::size_t layers = 1;

  std::size_t params_per_layer() const;
  std::size_t param_count() const { return params_per_layer() * layers; }
  void validate() const;

  friend bool operator==(const PqcTemplate&, const PqcTemplate&) = default;
};

/// RZ angle encoding with H basis changes. Features are split into
/// contiguous blocks of ceil(d / n) per qubit; qubit q gets
/// H, RZ(f0), H, RZ(f1), ... over its block.
std::vector<GateOp> encode_angles(std::span<const double> features, std::size_t n_qubits);

/// Feature indices assigned to each qubit by encode_angles.
std::vector<std::vector<std::size_t>> feature_blocks(std::size_t d, std::size_t n_qubits);

/// Template gates grouped by layer, parameters consumed in order.
std::vector<std::vector<GateOp>> build_pqc_layers(const PqcTemplate& t, std::span<const double> params);

std::vector<GateOp> build_pqc(const PqcTemplate& t, std::span<const double> params);

struct NoisePoint {
  ChannelKind kind;
  double rate;
  std::vector<std::size_t> qubits;

  friend bool operator==(const NoisePoint&, const NoisePoint&) = default;
};

struct LayerBoundary {
  friend bool operator==(const LayerBoundary&, const LayerBoundary&) = default;
};

using CircuitStep = std::variant<GateOp, NoisePoint, LayerBoundary>;

struct CircuitIR {
  std::size_t n_qubits = 0;
  std::vector<CircuitStep> steps;
  std::vector<std::size_t> measured_qubits;
  ReadoutConfusion readout;
  bool noise_woven = false;

  void validate() const;
  std::size_t gate_count() const;
  std::size_t channel_count() const;
  std::size_t channel_count(ChannelKind kind, std::size_t arity) const;
};

/// Encoder, boundary, then each template layer followed by a boundary.
/// Measures every qubit.
CircuitIR build_model_circuit(std::span<const double> features, const PqcTemplate& t,
                              std::span<const double> params);

/// Inserts device noise: depolarizing after every gate (one- or two-qubit
/// rate by gate arity), then at each layer boundary amplitude damping, phase
/// flip and bit flip on every qubit. Readout confusion moves onto the
/// measurement. Throws if the circuit already carries noise.
CircuitIR weave_noise(const CircuitIR& circuit, const DeviceProfile& profile);

/// Full density matrix by sequential gate/channel application. Reference path.
DensityMatrix<double> simulate(const CircuitIR& circuit);

/// Reduced 2x2 state of every measured qubit, computed by the fused executor
/// (product-state start, per-qubit fusion of one-qubit maps, sparse local
/// superoperators). Agrees with `simulate` to rounding.
std::vector<Eigen::Matrix2cd> measured_states(const CircuitIR& circuit);

/// Analytic when `shots == 0`, shot-sampled otherwise.
struct MeasurementMode {
  std::size_t shots = 0;

  bool analytic() const noexcept { return shots == 0; }
  static MeasurementMode exact() { return {0}; }
  static MeasurementMode sampled(std::size_t n) { return {n}; }

  friend bool operator==(const MeasurementMode&, const MeasurementMode&) = default;
};

/// Per measured qubit <Z> after readout confusion: its expectation in
/// analytic mode, a shot estimate otherwise (requires `rng`).
Vector measure_z(const CircuitIR& circuit, MeasurementMode mode, Rng* rng);

}  // namespace qsteal
