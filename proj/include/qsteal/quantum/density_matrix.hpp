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
#include <utility>

#include <Eigen/Eigenvalues>

#include "qsteal/common.hpp"

namespace qsteal {

/// Mixed state on `n` qubits stored as a dense 2^n x 2^n matrix.
///
/// Basis index convention: qubit 0 is the least significant bit of the
/// computational-basis index.
template <typename Real = double>
class DensityMatrix {
 public:
  using Scalar = Complex<Real>;
  using MatrixType = CMatrix<Real>;

  static constexpr std::size_t kMaxQubits = 8;

  /// |0...0><0...0|
  static DensityMatrix ground(std::size_t n_qubits) {
    check_width(n_qubits);
    const auto d = std::size_t{1} << n_qubits;
    MatrixType m = MatrixType::Zero(d, d);
    m(0, 0) = Scalar(1);
    return DensityMatrix(n_qubits, std::move(m));
  }

  /// |b><b| for a computational-basis index b.
  static DensityMatrix basis(std::size_t n_qubits, std::size_t index) {
    check_width(n_qubits);
    const auto d = std::size_t{1} << n_qubits;
    if (index >= d) throw Error("basis index out of range");
    MatrixType m = MatrixType::Zero(d, d);
    m(index, index) = Scalar(1);
    return DensityMatrix(n_qubits, std::move(m));
  }

  static DensityMatrix maximally_mixed(std::size_t n_qubits) {
    check_width(n_qubits);
    const auto d = std::size_t{1} << n_qubits;
    MatrixType m = MatrixType::Identity(d, d) * Scalar(Real(1) / Real(d));
    return DensityMatrix(n_qubits, std::move(m));
  }

  /// |psi><psi| for a (normalized) state vector.
  static DensityMatrix pure(const CVector<Real>& psi) {
    const auto n = width_of(static_cast<std::size_t>(psi.size()));
    return DensityMatrix(n, psi * psi.adjoint());
  }

  /// Wraps an arbitrary square matrix of power-of-two dimension. The state
  /// invariants are not enforced; use `check()` for that.
  static DensityMatrix from_matrix(MatrixType m) {
    if (m.rows() != m.cols()) throw Error("density matrix must be square");
    const auto n = width_of(static_cast<std::size_t>(m.rows()));
    return DensityMatrix(n, std::move(m));
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }

  const MatrixType& matrix() const noexcept { return data_; }
  MatrixType& matrix() noexcept { return data_; }

  Scalar operator()(std::size_t r, std::size_t c) const { return data_(r, c); }

  Scalar trace() const { return data_.trace(); }

  Real trace_error() const { return std::abs(trace() - Scalar(1)); }

  /// max |rho - rho^dagger| entrywise.
  Real hermiticity_error() const {
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  }

  /// Smallest eigenvalue of the Hermitian part. O(dim^3); meant for tests.
  Real min_eigenvalue() const {
    const MatrixType herm = (data_ + data_.adjoint()) * Scalar(Real(0.5));
    Eigen::SelfAdjointEigenSolver<MatrixType> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  struct CheckResult {
    Real trace_error;
    Real hermiticity_error;
    Real min_eigenvalue;
    bool ok;
  };

  CheckResult check(Real tol = Real(1e-10), Real eig_floor = Real(-1e-9)) const {
    CheckResult r{trace_error(), hermiticity_error(), min_eigenvalue(), false};
    r.ok = r.trace_error <= tol && r.hermiticity_error <= tol && r.min_eigenvalue >= eig_floor;
    return r;
  }

 private:
  DensityMatrix(std::size_t n, MatrixType m) : n_qubits_(n), data_(std::move(m)) {}

  static void check_width(std::size_t n) {
    if (n == 0 || n > kMaxQubits) throw Error("qubit count must be in [1, 8]");
  }

  static std::size_t width_of(std::size_t d) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < d) ++n;
    if ((std::size_t{1} << n) != d) throw Error("dimension is not a power of two");
    check_width(n);
    return n;
  }

  std::size_t n_qubits_;
  MatrixType data_;
};

}  // namespace qsteal
