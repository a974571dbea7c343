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

#include <json.hpp>

#include "qsteal/circuit.hpp"
#include "qsteal/common.hpp"
#include "qsteal/device.hpp"
#include "qsteal/rng.hpp"

namespace qsteal {

/// Hybrid QNN: angle encoder, PQC, per-qubit <Z>, linear head, softmax.
struct HybridModel {
  PqcTemplate pqc;
  Vector theta;  // PQC angles, radians
  Matrix W;      // classes x n_qubits
  Vector b;      // classes
  std::uint64_t seed = 0;

  std::size_t n_qubits() const noexcept { return pqc.n_qubits; }
  std::size_t classes() const noexcept { return static_cast<std::size_t>(b.size()); }
  std::size_t parameter_count() const noexcept {
    return static_cast<std::size_t>(theta.size() + W.size() + b.size());
  }

  /// theta ++ W (row-major) ++ b.
  Vector flatten() const;
  void assign(const Vector& flat);

  void validate() const;

  /// theta ~ U[0, 2pi), W, b ~ U[-0.1, 0.1].
  static HybridModel init(const PqcTemplate& pqc, std::size_t classes, std::uint64_t seed);
};

/// Same template, seed, shapes and bitwise-equal parameters.
bool identical(const HybridModel& a, const HybridModel& c);

/// Max-subtracted softmax.
Vector softmax(const Vector& logits);

/// Noisy circuit for one input under `profile`.
CircuitIR model_circuit(const HybridModel& m, const Vector& x, const DeviceProfile& profile);

/// Per-qubit <Z> features the head sees.
Vector quantum_features(const HybridModel& m, const Vector& x, const DeviceProfile& profile,
                        MeasurementMode mode, Rng* rng);

/// Class probabilities. `rng` is required only in shot mode.
Vector forward(const HybridModel& m, const Vector& x, const DeviceProfile& profile, MeasurementMode mode,
               Rng* rng = nullptr);

/// Versioned checkpoint document; doubles round-trip exactly.
nlohmann::json to_json(const HybridModel& m);
HybridModel model_from_json(const nlohmann::json& j);
void save_checkpoint(const HybridModel& m, const std::string& path);
HybridModel load_checkpoint(const std::string& path);

}  // namespace qsteal
