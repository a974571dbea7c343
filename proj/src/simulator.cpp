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

#include <variant>

#include "qsteal/circuit.hpp"
#include "qsteal/quantum/evolution.hpp"

namespace qsteal {

DensityMatrix<double> simulate(const CircuitIR& circuit) {
  circuit.validate();
  auto rho = DensityMatrix<double>::ground(circuit.n_qubits);
  for (const auto& step : circuit.steps) {
    if (const auto* g = std::get_if<GateOp>(&step)) {
      rho = apply_gate(rho, *g);
    } else if (const auto* np = std::get_if<NoisePoint>(&step)) {
      rho = apply_channel(rho, KrausChannel<double>::make(np->kind, np->rate, np->qubits.size()), np->qubits);
    }
  }
  return rho;
}

namespace {

using Superop = Eigen::MatrixXcd;

/// Depolarizing in closed form: (1 - w) rho + w tr(rho) I / D with
/// w = p for one qubit and 16p/15 for two.
Superop depolarizing_superop(double p, std::size_t arity) {
  const Eigen::Index ld = Eigen::Index{1} << arity;
  const double w = arity == 1 ? p : 16.0 * p / 15.0;
  Superop s = Superop::Identity(ld * ld, ld * ld) * (1.0 - w);
  for (Eigen::Index a = 0; a < ld; ++a)
    for (Eigen::Index i = 0; i < ld; ++i) s(a * ld + a, i * ld + i) += w / static_cast<double>(ld);
  return s;
}

Superop step_superop(const CircuitStep& step) {
  if (const auto* g = std::get_if<GateOp>(&step)) return superoperator<double>({gate_matrix<double>(*g)});
  const auto& np = std::get<NoisePoint>(step);
  if (np.kind == ChannelKind::Depolarizing) return depolarizing_superop(np.rate, np.qubits.size());
  return superoperator<double>(KrausChannel<double>::make(np.kind, np.rate, np.qubits.size()).operators());
}

bool is_noop(const CircuitStep& step) {
  if (std::holds_alternative<LayerBoundary>(step)) return true;
  if (const auto* np = std::get_if<NoisePoint>(&step)) return np->rate == 0.0;
  return false;
}

const std::vector<std::size_t>& step_qubits(const CircuitStep& step) {
  if (const auto* g = std::get_if<GateOp>(&step)) return g->qubits;
  return std::get<NoisePoint>(step).qubits;
}

Eigen::Matrix2cd apply_single(const Superop& s, const Eigen::Matrix2cd& rho) {
  Eigen::Vector4cd v(rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1));
  Eigen::Vector4cd w = s * v;
  Eigen::Matrix2cd out;
  out << w(0), w(1), w(2), w(3);
  return out;
}

}  // namespace

namespace {

/// (1 - w) rho + w I/4 (x) tr_ab(rho) on register bits a, b.
void depolarize_pair(Eigen::MatrixXcd& rho, double p, std::size_t a, std::size_t b) {
  const double w = 16.0 * p / 15.0;
  const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
  const std::size_t off[4] = {0, mb, ma, ma | mb};
  const auto d = static_cast<std::size_t>(rho.rows());
  Eigen::VectorXcd traces(static_cast<Eigen::Index>(d * d / 16));
  std::size_t k = 0;
  for (std::size_t c = 0; c < d; ++c) {
    if (c & (ma | mb)) continue;
    for (std::size_t r = 0; r < d; ++r) {
      if (r & (ma | mb)) continue;
      std::complex<double> t = 0;
      for (auto o : off) t += rho(static_cast<Eigen::Index>(r | o), static_cast<Eigen::Index>(c | o));
      traces(static_cast<Eigen::Index>(k++)) = t;
    }
  }
  rho *= 1.0 - w;
  k = 0;
  for (std::size_t c = 0; c < d; ++c) {
    if (c & (ma | mb)) continue;
    for (std::size_t r = 0; r < d; ++r) {
      if (r & (ma | mb)) continue;
      const std::complex<double> t = traces(static_cast<Eigen::Index>(k++)) * (w / 4.0);
      for (auto o : off) rho(static_cast<Eigen::Index>(r | o), static_cast<Eigen::Index>(c | o)) += t;
    }
  }
}

}  // namespace

std::vector<Eigen::Matrix2cd> measured_states(const CircuitIR& circuit) {
  circuit.validate();
  const std::size_t n = circuit.n_qubits;
  constexpr std::size_t kOut = static_cast<std::size_t>(-1);

  // Index of the last two-qubit step touching each qubit. After it only
  // local maps act on that qubit, so its reduced state can be taken and the
  // qubit traced out of the register.
  std::vector<std::size_t> last_pair(n, kOut);
  for (std::size_t i = 0; i < circuit.steps.size(); ++i) {
    if (is_noop(circuit.steps[i])) continue;
    const auto& qs = step_qubits(circuit.steps[i]);
    if (qs.size() == 2) last_pair[qs[0]] = last_pair[qs[1]] = i;
  }

  std::vector<Superop> pending(n, Superop::Identity(4, 4));
  std::vector<bool> pending_identity(n, true);
  std::vector<Eigen::Matrix2cd> local(n);
  for (auto& l : local) {
    l.setZero();
    l(0, 0) = 1;
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Ones(1, 1);
  std::vector<std::size_t> reg;  // register bit -> logical qubit
  auto bit_of = [&](std::size_t q) {
    for (std::size_t i = 0; i < reg.size(); ++i)
      if (reg[i] == q) return i;
    return kOut;
  };

  for (std::size_t i = 0; i < circuit.steps.size(); ++i) {
    const auto& step = circuit.steps[i];
    if (is_noop(step)) continue;
    const auto& qubits = step_qubits(step);
    if (qubits.size() == 1) {
      pending[qubits[0]] = step_superop(step) * pending[qubits[0]];
      pending_identity[qubits[0]] = false;
      continue;
    }
    std::vector<std::size_t> bits;
    for (auto q : qubits) {
      std::size_t bit = bit_of(q);
      if (bit == kOut) {
        rho = kron_above<double>(apply_single(pending[q], local[q]), rho);
        reg.push_back(q);
        bit = reg.size() - 1;
      } else if (!pending_identity[q]) {
        SuperopKernel<double>(pending[q], {bit}, reg.size()).apply(rho);
      }
      pending[q] = Superop::Identity(4, 4);
      pending_identity[q] = true;
      bits.push_back(bit);
    }
    const auto* np = std::get_if<NoisePoint>(&step);
    if (np != nullptr && np->kind == ChannelKind::Depolarizing) {
      depolarize_pair(rho, np->rate, bits[0], bits[1]);
    } else if (np != nullptr) {
      const LocalLayout layout(bits, reg.size());
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
      for (const auto& k : KrausChannel<double>::make(np->kind, np->rate, 2).operators()) {
        Eigen::MatrixXcd term = rho;
        conjugate_local<double>(term, k, layout);
        acc += term;
      }
      rho = std::move(acc);
    } else {
      conjugate_local<double>(rho, gate_matrix<double>(std::get<GateOp>(step)), LocalLayout(bits, reg.size()));
    }
    for (auto q : qubits) {
      if (last_pair[q] != i) continue;
      const std::size_t bit = bit_of(q);
      local[q] = reduced_state<double>(rho, bit);
      rho = trace_out<double>(rho, bit);
      reg.erase(reg.begin() + static_cast<std::ptrdiff_t>(bit));
    }
  }

  std::vector<Eigen::Matrix2cd> out;
  out.reserve(circuit.measured_qubits.size());
  for (auto q : circuit.measured_qubits) out.push_back(apply_single(pending[q], local[q]));
  return out;
}

Vector measure_z(const CircuitIR& circuit, MeasurementMode mode, Rng* rng) {
  if (!mode.analytic() && rng == nullptr) throw Error("shot sampling needs a random stream");
  const auto states = measured_states(circuit);
  Vector e(static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double p0 = std::clamp(states[i](0, 0).real(), 0.0, 1.0);
    const auto& confusion = circuit.readout.for_qubit(circuit.measured_qubits[i]);
    e(static_cast<Eigen::Index>(i)) = mode.analytic() ? confused_expectation(p0, confusion)
                                                      : sample_z_from_marginal(p0, mode.shots, confusion, *rng);
  }
  return e;
}

}  // namespace qsteal
