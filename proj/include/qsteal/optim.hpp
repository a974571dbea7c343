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
#include <cstdint>

#include "qsteal/common.hpp"
#include "qsteal/rng.hpp"

namespace qsteal {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Vector m;
  Vector v;
  std::uint64_t t = 0;

  static AdamState zeros(Eigen::Index n) { return {Vector::Zero(n), Vector::Zero(n), 0}; }
};

/// One bias-corrected Adam update of `params` in place.
inline void adam_step(Vector& params, const Vector& grads, AdamState& state, const AdamConfig& cfg) {
  if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size())
    throw Error("adam_step: shape mismatch");
  state.t += 1;
  state.m = cfg.beta1 * state.m + (1 - cfg.beta1) * grads;
  state.v = cfg.beta2 * state.v + (1 - cfg.beta2) * grads.cwiseProduct(grads);
  const double c1 = 1 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double c2 = 1 - std::pow(cfg.beta2, static_cast<double>(state.t));
  params.array() -= cfg.learning_rate * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + cfg.epsilon);
}

/// Rademacher draw for one SPSA step.
inline Vector rademacher(Eigen::Index n, Rng& rng) {
  Vector delta(n);
  for (Eigen::Index i = 0; i < n; ++i) delta(i) = rng.rademacher();
  return delta;
}

/// Simultaneous-perturbation gradient estimate from exactly two evaluations:
/// g_i = (L(theta + c delta) - L(theta - c delta)) / (2 c delta_i).
template <typename LossFn>
Vector spsa_gradient(LossFn&& loss_at, const Vector& theta, double c, Rng& rng) {
  if (!(c > 0)) throw Error("spsa_gradient: perturbation must be positive");
  const Vector delta = rademacher(theta.size(), rng);
  const double plus = loss_at(Vector(theta + c * delta));
  const double minus = loss_at(Vector(theta - c * delta));
  return ((plus - minus) / (2 * c)) * delta.cwiseInverse();
}

}  // namespace qsteal
