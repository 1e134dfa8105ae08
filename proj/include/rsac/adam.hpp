// Copyright 2026 The rsac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSAC_ADAM_HPP
#define RSAC_ADAM_HPP

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace rsac {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;

  void reset(Eigen::Index n) {
    m = Eigen::VectorXd::Zero(n);
    v = Eigen::VectorXd::Zero(n);
    t = 0;
  }
};

inline void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                      AdamState& state, const AdamConfig& cfg) {
  if (state.m.size() != params.size()) state.reset(params.size());
  ++state.t;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  params -= (cfg.lr / bc1) * state.m.cwiseQuotient(
                ((state.v / bc2).cwiseSqrt().array() + cfg.eps).matrix());
}

/// Rescales `grad` so its global L2 norm is at most `max_norm`.
/// Returns the pre-clip norm.
inline double clip_gradient(Eigen::VectorXd& grad, double max_norm) {
  const double norm = grad.norm();
  if (norm > max_norm && norm > 0.0) grad *= max_norm / norm;
  return norm;
}

}  // namespace rsac

#endif  // RSAC_ADAM_HPP
