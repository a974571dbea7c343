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

#include <cmath>
#include <cstddef>
#include <vector>

#include "qsteal/common.hpp"
#include "qsteal/quantum/density_matrix.hpp"
#include "qsteal/rng.hpp"

namespace qsteal {

/// Per-qubit classical readout confusion; entry (i, j) = P(read j | true i).
/// A single matrix is broadcast to every qubit.
class ReadoutConfusion {
 public:
  static constexpr double kRowTol = 1e-12;

  ReadoutConfusion() : matrices_{Eigen::Matrix2d::Identity()} {}

  explicit ReadoutConfusion(std::vector<Eigen::Matrix2d> per_qubit) : matrices_(std::move(per_qubit)) {
    if (matrices_.empty()) throw Error("readout confusion needs at least one matrix");
    for (std::size_t q = 0; q < matrices_.size(); ++q) {
      const auto& m = matrices_[q];
      for (int i = 0; i < 2; ++i) {
        if (m(i, 0) < 0 || m(i, 0) > 1 || m(i, 1) < 0 || m(i, 1) > 1)
          throw Error("readout[" + std::to_string(q) + "]: entries must lie in [0, 1]");
        if (std::abs(m(i, 0) + m(i, 1) - 1.0) > kRowTol)
          throw Error("readout[" + std::to_string(q) + "]: rows must sum to 1");
      }
    }
  }

  static ReadoutConfusion identity() { return {}; }

  bool broadcast() const noexcept { return matrices_.size() == 1; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const std::vector<Eigen::Matrix2d>& matrices() const noexcept { return matrices_; }

  const Eigen::Matrix2d& for_qubit(std::size_t q) const {
    if (broadcast()) return matrices_.front();
    if (q >= matrices_.size()) throw Error("no readout confusion for qubit " + std::to_string(q));
    return matrices_[q];
  }

  bool is_identity() const {
    for (const auto& m : matrices_)
      if (m != Eigen::Matrix2d::Identity()) return false;
    return true;
  }

 private:
  std::vector<Eigen::Matrix2d> matrices_;
};

/// P(outcome 0) on `qubit` from the diagonal.
template <typename Real>
Real probability_zero(const DensityMatrix<Real>& rho, std::size_t qubit) {
  if (qubit >= rho.n_qubits()) throw Error("measured qubit index out of range");
  const std::size_t m = std::size_t{1} << qubit;
  Real p0 = 0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    if ((i & m) == 0) p0 += rho(i, i).real();
  return p0;
}

/// Exact <Z_qubit> = tr(Z_q rho).
template <typename Real>
Real expectation_z(const DensityMatrix<Real>& rho, std::size_t qubit) {
  if (qubit >= rho.n_qubits()) throw Error("measured qubit index out of range");
  const std::size_t m = std::size_t{1} << qubit;
  Real e = 0;
  for (std::size_t i = 0; i < rho.dim(); ++i) e += (i & m) ? -rho(i, i).real() : rho(i, i).real();
  return e;
}

/// Shot estimate of <Z> from a marginal P(0) = p0: each shot draws the true
/// bit, then the read bit through `confusion`; returns (n0 - n1) / shots.
inline double sample_z_from_marginal(double p0, std::size_t shots, const Eigen::Matrix2d& confusion,
                                     Rng& rng) {
  if (shots == 0) throw Error("shots must be at least 1");
  long long balance = 0;
  for (std::size_t s = 0; s < shots; ++s) {
    const int truth = rng.uniform() < p0 ? 0 : 1;
    const int read = rng.uniform() < confusion(truth, 0) ? 0 : 1;
    balance += read == 0 ? 1 : -1;
  }
  return static_cast<double>(balance) / static_cast<double>(shots);
}

/// Shot-sampled <Z_qubit> with readout confusion.
template <typename Real>
double sample_expectation_z(const DensityMatrix<Real>& rho, std::size_t qubit, std::size_t shots,
                            const ReadoutConfusion& confusion, Rng& rng) {
  if (shots == 0) throw Error("shots must be at least 1");
  const double p0 = static_cast<double>(probability_zero(rho, qubit));
  return sample_z_from_marginal(p0, shots, confusion.for_qubit(qubit), rng);
}

/// Expected value of the shot estimate: the exact <Z> pushed through the
/// confusion matrix.
inline double confused_expectation(double p0, const Eigen::Matrix2d& c) {
  const double read0 = p0 * c(0, 0) + (1 - p0) * c(1, 0);
  return 2 * read0 - 1;
}

}  // namespace qsteal
