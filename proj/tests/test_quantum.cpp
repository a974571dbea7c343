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

#include "qsteal/quantum/channels.hpp"
#include "qsteal/quantum/density_matrix.hpp"
#include "qsteal/quantum/evolution.hpp"
#include "qsteal/quantum/gates.hpp"
#include "qsteal/quantum/measurement.hpp"
#include "qsteal/rng.hpp"

using namespace qsteal;
using C = std::complex<double>;

namespace {

DensityMatrix<double> plus_state() {
  CVector<double> psi(2);
  psi << C(1 / std::sqrt(2.0)), C(1 / std::sqrt(2.0));
  return DensityMatrix<double>::pure(psi);
}

double expectation(const DensityMatrix<double>& rho, const CMatrix<double>& op) {
  return (op * rho.matrix()).trace().real();
}

CMatrix<double> kron(const CMatrix<double>& a, const CMatrix<double>& b) {
  CMatrix<double> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("density matrix constructors") {
  const auto g = DensityMatrix<double>::ground(3);
  CHECK(g.dim() == 8);
  CHECK(g(0, 0) == C(1));
  CHECK(g.check().ok);
  const auto mm = DensityMatrix<double>::maximally_mixed(2);
  CHECK(std::abs(mm(3, 3).real() - 0.25) < 1e-15);
  CHECK_THROWS_AS(DensityMatrix<double>::ground(0), Error);
  CHECK_THROWS_AS(DensityMatrix<double>::ground(9), Error);
  CHECK_THROWS_AS(DensityMatrix<double>::from_matrix(CMatrix<double>::Identity(3, 3)), Error);
  CHECK_THROWS_AS(DensityMatrix<double>::basis(2, 4), Error);
}

TEST_CASE("every gate is unitary") {
  Rng rng(11);
  for (GateKind k : kAllGateKinds) {
    for (int rep = 0; rep < 10; ++rep) {
      GateOp g{k, arity(k) == 1 ? std::vector<std::size_t>{0} : std::vector<std::size_t>{0, 1}, std::nullopt};
      if (is_parameterized(k)) g.angle = rng.uniform(-10, 10);
      const auto u = gate_matrix<double>(g);
      const auto d = u.rows();
      CHECK((u.adjoint() * u - CMatrix<double>::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("gate validation") {
  CHECK_THROWS_AS(validate(GateOp{GateKind::RX, {0}, std::nullopt}, 2), Error);
  CHECK_THROWS_AS(validate(GateOp{GateKind::H, {0}, 0.5}, 2), Error);
  CHECK_THROWS_AS(validate(GateOp{GateKind::CNOT, {1, 1}, std::nullopt}, 2), Error);
  CHECK_THROWS_AS(validate(GateOp{GateKind::X, {2}, std::nullopt}, 2), Error);
}

TEST_CASE("qubit 0 is the least significant bit") {
  auto rho = DensityMatrix<double>::ground(3);
  rho = apply_gate(rho, GateOp{GateKind::X, {0}, std::nullopt});
  CHECK(std::abs(rho(1, 1).real() - 1) < 1e-15);
  rho = apply_gate(rho, GateOp{GateKind::CNOT, {0, 2}, std::nullopt});
  CHECK(std::abs(rho(5, 5).real() - 1) < 1e-15);
}

TEST_CASE("rotations follow exp(-i theta P / 2)") {
  const double t = 0.7;
  auto rho = apply_gate(DensityMatrix<double>::ground(1), GateOp{GateKind::RX, {0}, t});
  CHECK(std::abs(expectation_z(rho, 0) - std::cos(t)) < 1e-14);
  CHECK(std::abs(expectation(rho, pauli('Y')) + std::sin(t)) < 1e-14);
  rho = apply_gate(DensityMatrix<double>::ground(1), GateOp{GateKind::RY, {0}, t});
  CHECK(std::abs(expectation(rho, pauli('X')) - std::sin(t)) < 1e-14);
}

TEST_CASE("controlled rotation acts only when the control is set") {
  auto rho = apply_gate(DensityMatrix<double>::ground(2), GateOp{GateKind::CRX, {1, 0}, kPi});
  CHECK(std::abs(expectation_z(rho, 0) - 1) < 1e-14);
  rho = apply_gate(DensityMatrix<double>::basis(2, 2), GateOp{GateKind::CRX, {1, 0}, kPi});
  CHECK(std::abs(expectation_z(rho, 0) + 1) < 1e-14);
}

TEST_CASE("phase flip shrinks <X> to 1 - 2p") {
  for (double p : {0.0, 0.1, 0.25, 0.5, 0.9}) {
    const auto rho = apply_channel(plus_state(), KrausChannel<double>::phase_flip(p), {0});
    CHECK(std::abs(expectation(rho, pauli('X')) - (1 - 2 * p)) < 1e-14);
  }
}

TEST_CASE("bit flip shrinks <Z> to 1 - 2p") {
  for (double p : {0.0, 0.3, 1.0}) {
    const auto rho = apply_channel(DensityMatrix<double>::ground(1), KrausChannel<double>::bit_flip(p), {0});
    CHECK(std::abs(expectation_z(rho, 0) - (1 - 2 * p)) < 1e-14);
  }
}

TEST_CASE("amplitude damping leaves P(1) = 1 - gamma") {
  for (double g : {0.0, 0.2, 0.75, 1.0}) {
    const auto rho =
        apply_channel(DensityMatrix<double>::basis(1, 1), KrausChannel<double>::amplitude_damping(g), {0});
    CHECK(std::abs(rho(1, 1).real() - (1 - g)) < 1e-14);
    CHECK(std::abs(rho(0, 0).real() - g) < 1e-14);
  }
}

TEST_CASE("depolarizing matches (1 - w) rho + w I / D") {
  Rng rng(3);
  for (double p : {0.0, 0.05, 0.3, 0.75}) {
    // one qubit, Bloch vector shrinks by 1 - p
    const auto r1 = apply_channel(plus_state(), KrausChannel<double>::depolarizing(p), {0});
    CHECK(std::abs(expectation(r1, pauli('X')) - (1 - p)) < 1e-14);

    // two qubits on a random pure state, compared against the explicit mixture
    CVector<double> psi(4);
    for (int i = 0; i < 4; ++i) psi(i) = C(rng.normal(), rng.normal());
    psi.normalize();
    const auto rho = DensityMatrix<double>::pure(psi);
    const auto out = apply_channel(rho, KrausChannel<double>::depolarizing(p, 2), {0, 1});
    const double w = 16 * p / 15;
    const CMatrix<double> expected = (1 - w) * rho.matrix() + CMatrix<double>::Identity(4, 4) * C(w / 4);
    CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("two-qubit channel operators use qubits[0] as the high bit") {
  // X on the high local bit flips qubits[0]
  auto rho = DensityMatrix<double>::ground(2);
  const KrausChannel<double> flip_first(ChannelKind::BitFlip, 1, 2, {kron(pauli('X'), pauli('I'))});
  rho = apply_channel(rho, flip_first, {1, 0});
  CHECK(std::abs(expectation_z(rho, 1) + 1) < 1e-15);
  CHECK(std::abs(expectation_z(rho, 0) - 1) < 1e-15);
}

TEST_CASE("Kraus completeness for every channel kind over 50 rates") {
  for (int i = 0; i < 50; ++i) {
    const double rate = i / 49.0;
    CHECK(KrausChannel<double>::bit_flip(rate).completeness_error() < 1e-10);
    CHECK(KrausChannel<double>::phase_flip(rate).completeness_error() < 1e-10);
    CHECK(KrausChannel<double>::amplitude_damping(rate).completeness_error() < 1e-10);
    CHECK(KrausChannel<double>::depolarizing(rate, 1).completeness_error() < 1e-10);
    CHECK(KrausChannel<double>::depolarizing(rate, 2).completeness_error() < 1e-10);
  }
}

TEST_CASE("channel rates outside [0, 1] are rejected") {
  CHECK_THROWS_AS(KrausChannel<double>::bit_flip(-0.1), Error);
  CHECK_THROWS_AS(KrausChannel<double>::amplitude_damping(1.5), Error);
  CHECK_THROWS_AS(KrausChannel<double>::depolarizing(0.1, 3), Error);
  const std::vector<CMatrix<double>> bad = {CMatrix<double>::Identity(2, 2) * C(0.5)};
  CHECK_THROWS_AS(KrausChannel<double>(ChannelKind::BitFlip, 0.1, 1, bad), Error);
}

TEST_CASE("superoperator application agrees with the Kraus sum") {
  Rng rng(5);
  CVector<double> psi(8);
  for (int i = 0; i < 8; ++i) psi(i) = C(rng.normal(), rng.normal());
  psi.normalize();
  const auto rho = DensityMatrix<double>::pure(psi);
  const auto ch = KrausChannel<double>::depolarizing(0.2, 2);
  const auto expected = apply_channel(rho, ch, {2, 0});
  CMatrix<double> m = rho.matrix();
  SuperopKernel<double>(superoperator<double>(ch.operators()), {2, 0}, 3).apply(m);
  CHECK((m - expected.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("partial trace and kron_above are inverse on product states") {
  Rng rng(8);
  auto random_state = [&](int d) {
    CVector<double> v(d);
    for (int i = 0; i < d; ++i) v(i) = C(rng.normal(), rng.normal());
    v.normalize();
    return CMatrix<double>(v * v.adjoint());
  };
  const CMatrix<double> top = random_state(2);
  const CMatrix<double> rest = random_state(4);
  const CMatrix<double> joint = kron_above<double>(top, rest);
  CHECK((joint - kron(top, rest)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((trace_out<double>(joint, 2) - rest).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((reduced_state<double>(joint, 2) - top).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("readout confusion: analytic expectation and shot mean") {
  Eigen::Matrix2d c;
  c << 0.95, 0.05, 0.05, 0.95;
  CHECK(std::abs(confused_expectation(1.0, c) - 0.90) < 1e-15);
  CHECK(std::abs(confused_expectation(0.5, c)) < 1e-15);

  Rng rng(21);
  const std::size_t shots = 1000;
  const int reps = 400;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < reps; ++i) {
    const double z = sample_z_from_marginal(0.8, shots, c, rng);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - confused_expectation(0.8, c)) < 4 * se);

  Eigen::Matrix2d bad;
  bad << 0.9, 0.2, 0.1, 0.9;
  CHECK_THROWS_AS(ReadoutConfusion({bad}), Error);
}

TEST_CASE("measurement on the ground state") {
  const auto rho = DensityMatrix<double>::ground(2);
  CHECK(probability_zero(rho, 1) == doctest::Approx(1.0));
  CHECK(expectation_z(rho, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(expectation_z(rho, 2), Error);
}

TEST_CASE("single precision instantiation") {
  auto rho = DensityMatrix<float>::ground(2);
  rho = apply_gate(rho, GateOp{GateKind::H, {0}, std::nullopt});
  rho = apply_channel(rho, KrausChannel<float>::amplitude_damping(0.1), {0});
  CHECK(rho.check(1e-5f, -1e-5f).ok);
}
