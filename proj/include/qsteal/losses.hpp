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

#include "qsteal/common.hpp"

namespace qsteal {

/// Floor applied inside the logarithms; shot sampling can produce exact zeros.
constexpr double kLogFloor = 1e-12;

/// -ln(probs[label]).
inline double loss_nll(const Vector& probs, std::size_t label) {
  if (label >= static_cast<std::size_t>(probs.size())) throw Error("loss_nll: label out of range");
  return -std::log(std::max(probs(static_cast<Eigen::Index>(label)), kLogFloor));
}

/// KL(target || probs) = sum_i t_i ln(t_i / p_i), with 0 ln 0 = 0.
inline double loss_kl(const Vector& probs, const Vector& target) {
  if (probs.size() != target.size()) throw Error("loss_kl: size mismatch");
  double acc = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double t = target(i);
    if (t <= 0) continue;
    acc += t * (std::log(t) - std::log(std::max(probs(i), kLogFloor)));
  }
  return std::max(acc, 0.0);
}

}  // namespace qsteal
