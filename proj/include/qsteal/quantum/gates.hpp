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

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsteal/common.hpp"

namespace qsteal {

enum class GateKind { H, X, SX, RX, RY, RZ, CNOT, CZ, CRX, CRZ };

inline constexpr std::array<GateKind, 10> kAllGateKinds = {
    GateKind::H,  GateKind::X,    GateKind::SX, GateKind::RX,  GateKind::RY,
    GateKind::RZ, GateKind::CNOT, GateKind::CZ, GateKind::CRX, GateKind::CRZ};

constexpr std::size_t arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CRX:
    case GateKind::CRZ:
      return 2;
    default:
      return 1;
  }
}

constexpr bool is_parameterized(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::CRX ||
         k == GateKind::CRZ;
}

constexpr std::string_view name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::SX: return "SX";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRZ: return "CRZ";
  }
  return "?";
}

/// One gate application. For two-qubit gates `qubits[0]` is the control.
struct GateOp {
  GateKind kind;
  std::vector<std::size_t> qubits;
  std::optional<double> angle;

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

/// Throws if the op is malformed for a register of `n_qubits`.
inline void validate(const GateOp& g, std::size_t n_qubits) {
  if (g.qubits.size() != arity(g.kind))
    throw Error(std::string(name(g.kind)) + ": expected " + std::to_string(arity(g.kind)) +
                " qubit index(es)");
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] >= n_qubits)
      throw Error(std::string(name(g.kind)) + ": qubit index " + std::to_string(g.qubits[i]) +
                  " out of range for " + std::to_string(n_qubits) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      if (g.qubits[i] == g.qubits[j]) throw Error(std::string(name(g.kind)) + ": repeated qubit index");
  }
  if (is_parameterized(g.kind) && !g.angle)
    throw Error(std::string(name(g.kind)) + ": missing angle");
  if (!is_parameterized(g.kind) && g.angle)
    throw Error(std::string(name(g.kind)) + ": unexpected angle");
}

namespace detail {

template <typename Real>
CMatrix<Real> rotation(char axis, double theta) {
  using C = Complex<Real>;
  const Real c = static_cast<Real>(std::cos(theta / 2));
  const Real s = static_cast<Real>(std::sin(theta / 2));
  CMatrix<Real> u(2, 2);
  switch (axis) {
    case 'x':
      u << C(c, 0), C(0, -s), C(0, -s), C(c, 0);
      break;
    case 'y':
      u << C(c, 0), C(-s, 0), C(s, 0), C(c, 0);
      break;
    default:
      u << C(c, -s), C(0, 0), C(0, 0), C(c, s);
      break;
  }
  return u;
}

template <typename Real>
CMatrix<Real> controlled(const CMatrix<Real>& u) {
  CMatrix<Real> m = CMatrix<Real>::Identity(4, 4);
  m.block(2, 2, 2, 2) = u;
  return m;
}

}  // namespace detail

/// Local unitary of a gate: 2x2, or 4x4 with qubits[0] as the most
/// significant bit of the local index. Rotations follow exp(-i theta P / 2).
template <typename Real = double>
CMatrix<Real> gate_matrix(const GateOp& g) {
  using C = Complex<Real>;
  const Real r = static_cast<Real>(1.0 / std::sqrt(2.0));
  const double theta = g.angle.value_or(0.0);
  if (is_parameterized(g.kind) && !g.angle) throw Error(std::string(name(g.kind)) + ": missing angle");
  CMatrix<Real> u;
  switch (g.kind) {
    case GateKind::H:
      u.resize(2, 2);
      u << C(r), C(r), C(r), C(-r);
      return u;
    case GateKind::X:
      u.resize(2, 2);
      u << C(0), C(1), C(1), C(0);
      return u;
    case GateKind::SX:
      u.resize(2, 2);
      u << C(0.5, 0.5), C(0.5, -0.5), C(0.5, -0.5), C(0.5, 0.5);
      return u;
    case GateKind::RX: return detail::rotation<Real>('x', theta);
    case GateKind::RY: return detail::rotation<Real>('y', theta);
    case GateKind::RZ: return detail::rotation<Real>('z', theta);
    case GateKind::CNOT: {
      CMatrix<Real> x(2, 2);
      x << C(0), C(1), C(1), C(0);
      return detail::controlled<Real>(x);
    }
    case GateKind::CZ: {
      CMatrix<Real> z(2, 2);
      z << C(1), C(0), C(0), C(-1);
      return detail::controlled<Real>(z);
    }
    case GateKind::CRX: return detail::controlled<Real>(detail::rotation<Real>('x', theta));
    case GateKind::CRZ: return detail::controlled<Real>(detail::rotation<Real>('z', theta));
  }
  throw Error("unknown gate kind");
}

/// Full-register matrix of a local operator acting on `qubits` (same local
/// index convention as gate_matrix). O(4^n); intended for checks and tests.
template <typename Real = double>
CMatrix<Real> embed(const CMatrix<Real>& local, const std::vector<std::size_t>& qubits,
                    std::size_t n_qubits) {
  const std::size_t d = std::size_t{1} << n_qubits;
  const std::size_t k = qubits.size();
  std::size_t mask = 0;
  for (auto q : qubits) mask |= std::size_t{1} << q;
  auto local_index = [&](std::size_t full) {
    std::size_t l = 0;
    for (std::size_t j = 0; j < k; ++j) l |= ((full >> qubits[j]) & 1U) << (k - 1 - j);
    return l;
  };
  CMatrix<Real> m = CMatrix<Real>::Zero(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if ((r & ~mask) == (c & ~mask)) m(r, c) = local(local_index(r), local_index(c));
  return m;
}

template <typename Real = double>
CMatrix<Real> full_unitary(const GateOp& g, std::size_t n_qubits) {
  validate(g, n_qubits);
  return embed<Real>(gate_matrix<Real>(g), g.qubits, n_qubits);
}

}  // namespace qsteal
