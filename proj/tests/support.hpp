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

#include <filesystem>
#include <string>

#include "qsteal/circuit.hpp"
#include "qsteal/metrics.hpp"
#include "qsteal/rng.hpp"

namespace qsteal::testing {

inline GateOp random_gate(std::size_t n, Rng& rng) {
  const GateKind kind = kAllGateKinds[rng.index(kAllGateKinds.size())];
  GateOp g{kind, {}, std::nullopt};
  g.qubits.push_back(rng.index(n));
  if (arity(kind) == 2) {
    std::size_t t = rng.index(n - 1);
    if (t >= g.qubits[0]) ++t;
    g.qubits.push_back(t);
  }
  if (is_parameterized(kind)) g.angle = rng.uniform(-kTwoPi, kTwoPi);
  return g;
}

/// Random gates interleaved with random Kraus noise of every kind.
inline CircuitIR random_noisy_circuit(std::size_t n, std::size_t depth, Rng& rng) {
  CircuitIR c;
  c.n_qubits = n;
  for (std::size_t q = 0; q < n; ++q) c.measured_qubits.push_back(q);
  for (std::size_t i = 0; i < depth; ++i) {
    const GateOp g = random_gate(n, rng);
    c.steps.push_back(g);
    const double u = rng.uniform();
    if (u < 0.5) {
      const auto kind = static_cast<ChannelKind>(rng.index(4));
      std::vector<std::size_t> qs = {g.qubits[0]};
      if (kind == ChannelKind::Depolarizing && g.qubits.size() == 2) qs = g.qubits;
      c.steps.push_back(NoisePoint{kind, rng.uniform(0, 0.3), qs});
    } else if (u < 0.6) {
      c.steps.push_back(LayerBoundary{});
    }
  }
  c.noise_woven = true;
  return c;
}

/// Source directory, for test data files.
inline std::string source_dir() { return QSTEAL_SOURCE_DIR; }

/// Checks `value` against tests/expectations.json; a missing id is recorded
/// (first pinned run) and the file rewritten.
inline bool frozen(const std::string& id, double value, double tolerance) {
  const std::string path = source_dir() + "/tests/expectations.json";
  Expectations e = std::filesystem::exists(path) ? Expectations::load(path) : Expectations{};
  const bool known = e.contains(id);
  const bool ok = e.check_or_record(id, value, tolerance);
  if (!known) e.save(path);
  return ok;
}

}  // namespace qsteal::testing
