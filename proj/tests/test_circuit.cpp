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

#include <doctest.h>

#include <cmath>

#include "qsteal/circuit.hpp"
#include "qsteal/dataset.hpp"
#include "qsteal/quantum/evolution.hpp"
#include "support.hpp"

using namespace qsteal;

TEST_CASE("template parameter counts") {
  CHECK(PqcTemplate{PqcTemplateId::PQC1, 4, 1}.param_count() == 8);
  CHECK(PqcTemplate{PqcTemplateId::PQC19, 4, 1}.param_count() == 12);
  CHECK(PqcTemplate{PqcTemplateId::PQC6, 4, 1}.param_count() == 28);
  CHECK(PqcTemplate{PqcTemplateId::PQC17, 4, 1}.param_count() == 11);
  CHECK(PqcTemplate{PqcTemplateId::PQC19, 8, 2}.param_count() == 48);
  CHECK_THROWS_AS((PqcTemplate{PqcTemplateId::PQC19, 0, 1}.validate()), Error);
  CHECK_THROWS_AS((PqcTemplate{PqcTemplateId::PQC19, 4, 0}.validate()), Error);
}

TEST_CASE("template names parse loosely") {
  CHECK(parse_template("PQC19") == PqcTemplateId::PQC19);
  CHECK(parse_template("pqc-6") == PqcTemplateId::PQC6);
  CHECK(name(PqcTemplateId::PQC17) == "PQC17");
  CHECK_THROWS_AS(parse_template("PQC7"), Error);
}

TEST_CASE("PQC19 gate layout") {
  std::vector<double> params(12);
  for (std::size_t i = 0; i < params.size(); ++i) params[i] = 0.1 * static_cast<double>(i);
  const auto ops = build_pqc({PqcTemplateId::PQC19, 4, 1}, params);
  REQUIRE(ops.size() == 12);
  CHECK(ops[0].kind == GateKind::RX);
  CHECK(ops[1].kind == GateKind::RZ);
  // CRX ring from the top qubit downwards
  const std::vector<std::vector<std::size_t>> ring = {{3, 0}, {2, 3}, {1, 2}, {0, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(ops[8 + i].kind == GateKind::CRX);
    CHECK(ops[8 + i].qubits == ring[i]);
    CHECK(*ops[8 + i].angle == doctest::Approx(0.1 * static_cast<double>(8 + i)));
  }
  CHECK_THROWS_AS(build_pqc({PqcTemplateId::PQC19, 4, 1}, std::vector<double>(11)), Error);
}

TEST_CASE("feature blocks: d = 8 over 2 and 4 qubits") {
  const auto two = feature_blocks(8, 2);
  CHECK(two == std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}, {4, 5, 6, 7}});
  const auto four = feature_blocks(8, 4);
  CHECK(four == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const auto eight = feature_blocks(8, 8);
  CHECK(eight[7] == std::vector<std::size_t>{7});
  // fewer features than qubits leaves upper qubits empty
  CHECK(feature_blocks(2, 4)[3].empty());
  CHECK_THROWS_AS(feature_blocks(0, 4), Error);
}

TEST_CASE("encoder gate sequence") {
  const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
  const auto ops = encode_angles(x, 2);
  REQUIRE(ops.size() == 8);
  const std::vector<GateKind> expected = {GateKind::H, GateKind::RZ, GateKind::H, GateKind::RZ};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(ops[i].kind == expected[i]);
    CHECK(ops[4 + i].qubits[0] == 1);
  }
  CHECK(*ops[3].angle == 0.2);
}

TEST_CASE("encoded Bloch vector and PQC1 expectation in closed form") {
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const double f0 = rng.uniform(0, kTwoPi), f1 = rng.uniform(0, kTwoPi), a = rng.uniform(0, kTwoPi),
                 c = rng.uniform(0, kTwoPi);
    const std::vector<double> x = {f0, f1};
    const std::vector<double> params = {a, c};
    const auto circuit = build_model_circuit(x, {PqcTemplateId::PQC1, 1, 1}, params);
    const Vector z = measure_z(circuit, MeasurementMode::exact(), nullptr);
    // after the encoder: (sin f0 sin f1, -sin f0 cos f1, cos f0); RX(a) mixes y into z
    const double expected = std::cos(a) * std::cos(f0) - std::sin(a) * std::sin(f0) * std::cos(f1);
    CHECK(z(0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("model circuit structure and noise weaving") {
  const std::vector<double> x(8, 0.5);
  const std::vector<double> params(12, 0.3);
  const auto c = build_model_circuit(x, {PqcTemplateId::PQC19, 4, 1}, params);
  CHECK(c.gate_count() == 16 + 12);
  CHECK(c.channel_count() == 0);
  CHECK(c.measured_qubits.size() == 4);

  DeviceProfile dev = DeviceProfile::ideal();
  dev.name = "test";
  dev.p1 = 0.01;
  dev.p2 = 0.02;
  dev.gamma = 0.01;
  dev.p_phase = 0.01;
  dev.p_bit = 0.01;
  const auto noisy = weave_noise(c, dev);
  CHECK(noisy.noise_woven);
  CHECK(noisy.channel_count(ChannelKind::Depolarizing, 1) == 24);
  CHECK(noisy.channel_count(ChannelKind::Depolarizing, 2) == 4);
  // two layer boundaries, one channel of each kind per qubit at each
  CHECK(noisy.channel_count(ChannelKind::AmplitudeDamping, 1) == 8);
  CHECK(noisy.channel_count(ChannelKind::PhaseFlip, 1) == 8);
  CHECK(noisy.channel_count(ChannelKind::BitFlip, 1) == 8);
  CHECK_THROWS_AS(weave_noise(noisy, dev), Error);
}

TEST_CASE("simulator preserves trace, Hermiticity and positivity on 200 random noisy circuits") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto c = testing::random_noisy_circuit(4, 40, rng);
    const auto check = simulate(c).check(1e-10, -1e-9);
    CHECK(check.trace_error <= 1e-10);
    CHECK(check.hermiticity_error <= 1e-10);
    CHECK(check.min_eigenvalue >= -1e-9);
  }
}

TEST_CASE("fused executor matches the reference simulator") {
  Rng rng(77);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng.index(5);
    auto c = n == 1 ? CircuitIR{} : testing::random_noisy_circuit(n, 30, rng);
    if (n == 1) {
      c.n_qubits = 1;
      c.measured_qubits = {0};
      c.steps = {GateOp{GateKind::H, {0}, std::nullopt}, NoisePoint{ChannelKind::AmplitudeDamping, 0.3, {0}}};
    }
    // measure a random subset in a random order
    std::vector<std::size_t> measured;
    for (auto q : shuffled_indices(n, rng.next_u64()))
      if (measured.empty() || rng.uniform() < 0.6) measured.push_back(q);
    c.measured_qubits = measured;
    const auto full = simulate(c);
    const auto fast = measured_states(c);
    REQUIRE(fast.size() == measured.size());
    for (std::size_t k = 0; k < measured.size(); ++k) {
      const auto ref = reduced_state<double>(full.matrix(), measured[k]);
      CHECK((fast[k] - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("readout confusion enters the analytic expectation") {
  CircuitIR c;
  c.n_qubits = 2;
  c.measured_qubits = {0, 1};
  c.steps = {GateOp{GateKind::X, {1}, std::nullopt}};
  Eigen::Matrix2d m;
  m << 0.95, 0.05, 0.05, 0.95;
  c.readout = ReadoutConfusion({m});
  const Vector z = measure_z(c, MeasurementMode::exact(), nullptr);
  CHECK(z(0) == doctest::Approx(0.90));
  CHECK(z(1) == doctest::Approx(-0.90));
  CHECK_THROWS_AS(measure_z(c, MeasurementMode::sampled(100), nullptr), Error);
  Rng rng(1);
  const Vector s = measure_z(c, MeasurementMode::sampled(100), &rng);
  CHECK(std::abs(s(0)) <= 1.0);
}

TEST_CASE("circuit validation") {
  CircuitIR c;
  CHECK_THROWS_AS(c.validate(), Error);
  c.n_qubits = 2;
  CHECK_THROWS_AS(c.validate(), Error);
  c.measured_qubits = {0, 0};
  CHECK_THROWS_AS(c.validate(), Error);
  c.measured_qubits = {0};
  c.steps = {NoisePoint{ChannelKind::BitFlip, 1.5, {0}}};
  CHECK_THROWS_AS(c.validate(), Error);
}
