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
#include <vector>

#include "qsteal/common.hpp"
#include "qsteal/quantum/channels.hpp"
#include "qsteal/quantum/density_matrix.hpp"
#include "qsteal/quantum/gates.hpp"

namespace qsteal {

/// Index bookkeeping for a local operator on `qubits` inside an n-qubit
/// register: `bases` enumerates indices with all target bits cleared and
/// `offsets[l]` is the bit pattern of local index l.
struct LocalLayout {
  std::vector<std::size_t> bases;
  std::vector<std::size_t> offsets;

  LocalLayout(const std::vector<std::size_t>& qubits, std::size_t n_qubits) {
    const std::size_t k = qubits.size();
    const std::size_t d = std::size_t{1} << n_qubits;
    std::size_t mask = 0;
    for (auto q : qubits) mask |= std::size_t{1} << q;
    offsets.resize(std::size_t{1} << k);
    for (std::size_t l = 0; l < offsets.size(); ++l) {
      std::size_t off = 0;
      for (std::size_t j = 0; j < k; ++j)
        if ((l >> (k - 1 - j)) & 1U) off |= std::size_t{1} << qubits[j];
      offsets[l] = off;
    }
    bases.reserve(d >> k);
    for (std::size_t i = 0; i < d; ++i)
      if ((i & mask) == 0) bases.push_back(i);
  }
};

/// rho <- K rho K^dagger in place for a local (not necessarily unitary) K.
template <typename Real>
void conjugate_local(CMatrix<Real>& rho, const CMatrix<Real>& k, const LocalLayout& layout) {
  using C = Complex<Real>;
  const std::size_t ld = layout.offsets.size();
  const auto d = rho.rows();
  std::vector<C> buf(ld);
  // rows: rho <- K rho
  for (Eigen::Index c = 0; c < d; ++c) {
    for (std::size_t base : layout.bases) {
      for (std::size_t l = 0; l < ld; ++l) buf[l] = rho(base + layout.offsets[l], c);
      for (std::size_t a = 0; a < ld; ++a) {
        C acc(0);
        for (std::size_t l = 0; l < ld; ++l) acc += k(a, l) * buf[l];
        rho(base + layout.offsets[a], c) = acc;
      }
    }
  }
  // columns: rho <- rho K^dagger
  for (std::size_t base : layout.bases) {
    for (Eigen::Index r = 0; r < d; ++r) {
      for (std::size_t l = 0; l < ld; ++l) buf[l] = rho(r, base + layout.offsets[l]);
      for (std::size_t b = 0; b < ld; ++b) {
        C acc(0);
        for (std::size_t l = 0; l < ld; ++l) acc += buf[l] * std::conj(k(b, l));
        rho(r, base + layout.offsets[b]) = acc;
      }
    }
  }
}

/// rho' = U rho U^dagger, with U the full-register embedding of `g`.
template <typename Real>
DensityMatrix<Real> apply_gate(const DensityMatrix<Real>& rho, const GateOp& g) {
  validate(g, rho.n_qubits());
  DensityMatrix<Real> out = rho;
  conjugate_local<Real>(out.matrix(), gate_matrix<Real>(g), LocalLayout(g.qubits, rho.n_qubits()));
  return out;
}

/// rho' = sum_i K_i rho K_i^dagger on `qubits`.
template <typename Real>
DensityMatrix<Real> apply_channel(const DensityMatrix<Real>& rho, const KrausChannel<Real>& ch,
                                  const std::vector<std::size_t>& qubits) {
  if (qubits.size() != ch.arity())
    throw Error(std::string(name(ch.kind())) + ": channel arity does not match qubit list");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] >= rho.n_qubits()) throw Error("channel qubit index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (qubits[i] == qubits[j]) throw Error("channel qubit indices must be distinct");
  }
  if (ch.completeness_error() > KrausChannel<Real>::kCompletenessTol)
    throw Error("channel violates completeness");
  const LocalLayout layout(qubits, rho.n_qubits());
  CMatrix<Real> acc = CMatrix<Real>::Zero(rho.dim(), rho.dim());
  for (const auto& k : ch.operators()) {
    CMatrix<Real> term = rho.matrix();
    conjugate_local<Real>(term, k, layout);
    acc += term;
  }
  return DensityMatrix<Real>::from_matrix(std::move(acc));
}

/// Local superoperator in row-major vectorization: entry (a*D + b, i*D + j)
/// maps rho_local(i, j) into rho_local(a, b). Sum of K (x) conj(K).
template <typename Real>
CMatrix<Real> superoperator(const std::vector<CMatrix<Real>>& kraus) {
  const auto ld = kraus.front().rows();
  CMatrix<Real> s = CMatrix<Real>::Zero(ld * ld, ld * ld);
  for (const auto& k : kraus)
    for (Eigen::Index a = 0; a < ld; ++a)
      for (Eigen::Index b = 0; b < ld; ++b)
        for (Eigen::Index i = 0; i < ld; ++i)
          for (Eigen::Index j = 0; j < ld; ++j) s(a * ld + b, i * ld + j) += k(a, i) * std::conj(k(b, j));
  return s;
}

/// Applies a local superoperator in place, skipping its exact zeros.
template <typename Real>
class SuperopKernel {
 public:
  SuperopKernel(const CMatrix<Real>& s, const std::vector<std::size_t>& qubits, std::size_t n_qubits)
      : layout_(qubits, n_qubits), ld_(layout_.offsets.size()) {
    const auto n = s.rows();
    row_start_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        if (s(r, c) != Complex<Real>(0)) {
          cols_.push_back(static_cast<std::size_t>(c));
          vals_.push_back(s(r, c));
        }
      }
      row_start_[static_cast<std::size_t>(r) + 1] = cols_.size();
    }
  }

  void apply(CMatrix<Real>& rho) const {
    using C = Complex<Real>;
    const std::size_t n = ld_ * ld_;
    std::vector<C> in(n), out(n);
    for (std::size_t cb : layout_.bases) {
      for (std::size_t rb : layout_.bases) {
        for (std::size_t i = 0; i < ld_; ++i)
          for (std::size_t j = 0; j < ld_; ++j)
            in[i * ld_ + j] = rho(rb + layout_.offsets[i], cb + layout_.offsets[j]);
        for (std::size_t r = 0; r < n; ++r) {
          C acc(0);
          for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) acc += vals_[p] * in[cols_[p]];
          out[r] = acc;
        }
        for (std::size_t a = 0; a < ld_; ++a)
          for (std::size_t b = 0; b < ld_; ++b)
            rho(rb + layout_.offsets[a], cb + layout_.offsets[b]) = out[a * ld_ + b];
      }
    }
  }

 private:
  LocalLayout layout_;
  std::size_t ld_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> cols_;
  std::vector<Complex<Real>> vals_;
};

/// Reduced 2x2 state of `qubit` (partial trace over the rest). O(dim).
template <typename Real>
CMatrix<Real> reduced_state(const CMatrix<Real>& rho, std::size_t qubit) {
  const std::size_t m = std::size_t{1} << qubit;
  CMatrix<Real> out = CMatrix<Real>::Zero(2, 2);
  for (std::size_t r = 0; r < static_cast<std::size_t>(rho.rows()); ++r) {
    if (r & m) continue;
    out(0, 0) += rho(r, r);
    out(0, 1) += rho(r, r | m);
    out(1, 0) += rho(r | m, r);
    out(1, 1) += rho(r | m, r | m);
  }
  return out;
}

/// Partial trace over `qubit`; the qubits above it shift down by one.
template <typename Real>
CMatrix<Real> trace_out(const CMatrix<Real>& rho, std::size_t qubit) {
  const std::size_t d = static_cast<std::size_t>(rho.rows()) / 2;
  const std::size_t low = (std::size_t{1} << qubit) - 1;
  auto widen = [&](std::size_t i) { return ((i & ~low) << 1) | (i & low); };
  const std::size_t m = std::size_t{1} << qubit;
  CMatrix<Real> out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    const std::size_t wc = widen(c);
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t wr = widen(r);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rho(static_cast<Eigen::Index>(wr), static_cast<Eigen::Index>(wc)) +
          rho(static_cast<Eigen::Index>(wr | m), static_cast<Eigen::Index>(wc | m));
    }
  }
  return out;
}

/// kron(top, rho): `top` becomes the most significant qubit.
template <typename Real>
CMatrix<Real> kron_above(const CMatrix<Real>& top, const CMatrix<Real>& rho) {
  const auto d = rho.rows();
  CMatrix<Real> out(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) out.block(i * d, j * d, d, d) = top(i, j) * rho;
  return out;
}

}  // namespace qsteal
