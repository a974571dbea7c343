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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsteal/common.hpp"

namespace qsteal {

enum class ChannelKind { BitFlip, PhaseFlip, Depolarizing, AmplitudeDamping };

constexpr std::string_view name(ChannelKind k) {
  switch (k) {
    case ChannelKind::BitFlip: return "BitFlip";
    case ChannelKind::PhaseFlip: return "PhaseFlip";
    case ChannelKind::Depolarizing: return "Depolarizing";
    case ChannelKind::AmplitudeDamping: return "AmplitudeDamping";
  }
  return "?";
}

template <typename Real = double>
CMatrix<Real> pauli(char p) {
  using C = Complex<Real>;
  CMatrix<Real> m(2, 2);
  switch (p) {
    case 'X': m << C(0), C(1), C(1), C(0); break;
    case 'Y': m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 'Z': m << C(1), C(0), C(0), C(-1); break;
    default: m = CMatrix<Real>::Identity(2, 2); break;
  }
  return m;
}

/// Completely positive trace-preserving map rho -> sum_i K_i rho K_i^dagger
/// on one or two qubits. Completeness is checked at construction.
template <typename Real = double>
class KrausChannel {
 public:
  static constexpr double kCompletenessTol = 1e-10;

  KrausChannel(ChannelKind kind, double rate, std::size_t arity, std::vector<CMatrix<Real>> ops)
      : kind_(kind), rate_(rate), arity_(arity), operators_(std::move(ops)) {
    if (!(rate_ >= 0.0 && rate_ <= 1.0))
      throw Error(std::string(name(kind_)) + ": rate must lie in [0, 1]");
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << arity_);
    if (operators_.empty()) throw Error("Kraus channel needs at least one operator");
    for (const auto& k : operators_)
      if (k.rows() != d || k.cols() != d) throw Error("Kraus operator dimension mismatch");
    if (completeness_error() > kCompletenessTol)
      throw Error(std::string(name(kind_)) + ": Kraus operators are not trace preserving");
  }

  static KrausChannel bit_flip(double p) {
    check_rate(p, "BitFlip");
    return KrausChannel(ChannelKind::BitFlip, p, 1,
                        {scaled(pauli<Real>('I'), 1 - p), scaled(pauli<Real>('X'), p)});
  }

  static KrausChannel phase_flip(double p) {
    check_rate(p, "PhaseFlip");
    return KrausChannel(ChannelKind::PhaseFlip, p, 1,
                        {scaled(pauli<Real>('I'), 1 - p), scaled(pauli<Real>('Z'), p)});
  }

  /// Single qubit: rho -> (1 - p) rho + p I/2, i.e. K0 = sqrt(1 - 3p/4) I and
  /// sqrt(p/4) X, Y, Z. Two qubits: K0 = sqrt(1 - p) I and sqrt(p/15) for each
  /// of the 15 non-identity Pauli products.
  static KrausChannel depolarizing(double p, std::size_t arity = 1) {
    check_rate(p, "Depolarizing");
    std::vector<CMatrix<Real>> ops;
    if (arity == 1) {
      ops.push_back(scaled(pauli<Real>('I'), 1 - 0.75 * p));
      for (char c : {'X', 'Y', 'Z'}) ops.push_back(scaled(pauli<Real>(c), p / 4));
    } else if (arity == 2) {
      const char labels[] = {'I', 'X', 'Y', 'Z'};
      for (char a : labels) {
        for (char b : labels) {
          const CMatrix<Real> pa = pauli<Real>(a);
          const CMatrix<Real> pb = pauli<Real>(b);
          CMatrix<Real> prod(4, 4);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) prod.block(2 * i, 2 * j, 2, 2) = pa(i, j) * pb;
          const bool identity = a == 'I' && b == 'I';
          ops.push_back(scaled(prod, identity ? 1 - p : p / 15));
        }
      }
    } else {
      throw Error("Depolarizing: arity must be 1 or 2");
    }
    return KrausChannel(ChannelKind::Depolarizing, p, arity, std::move(ops));
  }

  static KrausChannel amplitude_damping(double gamma) {
    check_rate(gamma, "AmplitudeDamping");
    using C = Complex<Real>;
    CMatrix<Real> k0(2, 2), k1(2, 2);
    k0 << C(1), C(0), C(0), C(static_cast<Real>(std::sqrt(1 - gamma)));
    k1 << C(0), C(static_cast<Real>(std::sqrt(gamma))), C(0), C(0);
    return KrausChannel(ChannelKind::AmplitudeDamping, gamma, 1, {k0, k1});
  }

  static KrausChannel make(ChannelKind kind, double rate, std::size_t arity = 1) {
    switch (kind) {
      case ChannelKind::BitFlip: return bit_flip(rate);
      case ChannelKind::PhaseFlip: return phase_flip(rate);
      case ChannelKind::Depolarizing: return depolarizing(rate, arity);
      case ChannelKind::AmplitudeDamping: return amplitude_damping(rate);
    }
    throw Error("unknown channel kind");
  }

  ChannelKind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::vector<CMatrix<Real>>& operators() const noexcept { return operators_; }

  /// max |sum_i K_i^dagger K_i - I| entrywise.
  Real completeness_error() const {
    const auto d = operators_.front().rows();
    CMatrix<Real> acc = CMatrix<Real>::Zero(d, d);
    for (const auto& k : operators_) acc += k.adjoint() * k;
    return (acc - CMatrix<Real>::Identity(d, d)).cwiseAbs().maxCoeff();
  }

 private:
  static void check_rate(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(what) + ": rate must lie in [0, 1]");
  }

  static CMatrix<Real> scaled(const CMatrix<Real>& m, double weight) {
    return m * Complex<Real>(static_cast<Real>(std::sqrt(std::max(weight, 0.0))));
  }

  ChannelKind kind_;
  double rate_;
  std::size_t arity_;
  std::vector<CMatrix<Real>> operators_;
};

}  // namespace qsteal
