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

#ifndef RSAC_RISK_HPP
#define RSAC_RISK_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace rsac {

/// Hyperparameters of the entropic-risk critic target. beta < 0 trains a
/// risk-averse critic, beta > 0 a risk-seeking one; beta == 0 callers must
/// dispatch to the risk-neutral target instead.
struct RiskParams {
  double beta = -1.0;
  double alpha = 0.0;
  double gamma = 0.99;
};

/// Entropy of a finite distribution; zero-probability entries contribute 0.
template <class Real>
Real policy_entropy(std::span<const Real> pi) {
  Real h = 0;
  for (Real p : pi)
    if (p > Real(0)) h -= p * std::log(p);
  return h;
}

/// (1/beta) * log(sum_i w_i * exp(beta * v_i)), evaluated with the shift
/// x_bar = max_i v_i so the exponent stays bounded (finite results for
/// |beta * range(v)| up to ~700).
template <class Real>
Real logsumexp_shifted(std::span<const Real> weights, std::span<const Real> values,
                       Real beta) {
  if (beta == Real(0)) throw std::invalid_argument("logsumexp_shifted requires beta != 0");
  if (weights.size() != values.size() || values.empty())
    throw std::invalid_argument("logsumexp_shifted: size mismatch");
  const Real shift = *std::max_element(values.begin(), values.end());
  Real acc = 0;
  for (size_t i = 0; i < values.size(); ++i)
    acc += weights[i] * std::exp(beta * (values[i] - shift));
  return shift + std::log(acc) / beta;
}

/// Entropic-risk critic target in Q-space (the numerically stable form):
///   Qhat = r + gamma*alpha*H' + gamma*shift
///        + (1/beta) * log sum_a' pi(a'|s') exp(beta*gamma*(Q(a') - shift)),
/// where Q(a') is the elementwise minimum of the two target critics and H'
/// the next-state policy entropy. The shift identity holds for any shift;
/// taking max Q for beta > 0 and min Q for beta < 0 keeps every exponent
/// nonpositive, so the result is finite for arbitrary finite critic ranges.
/// Done transitions truncate to Qhat = r.
template <class Real>
Real entropic_target(Real reward, bool done, std::span<const Real> pi_next,
                     std::span<const Real> q_next_min, const RiskParams& rp) {
  if (rp.beta == 0.0) throw std::invalid_argument("entropic_target requires beta != 0");
  if (done) return reward;
  if (pi_next.size() != q_next_min.size() || pi_next.empty())
    throw std::invalid_argument("entropic_target: size mismatch");
  const Real h = policy_entropy(pi_next);
  const auto [lo, hi] = std::minmax_element(q_next_min.begin(), q_next_min.end());
  const Real shift = rp.beta > 0 ? *hi : *lo;
  Real acc = 0;
  for (size_t a = 0; a < pi_next.size(); ++a)
    acc += pi_next[a] * std::exp(rp.beta * rp.gamma * (q_next_min[a] - shift));
  return reward + rp.gamma * rp.alpha * h + rp.gamma * shift + std::log(acc) / rp.beta;
}

/// Elementwise Q = (1/beta) * log(Qbar), the inverse of Qbar = exp(beta*Q).
template <class Real>
std::vector<Real> critic_readout(std::span<const Real> qbar, Real beta) {
  if (beta == Real(0)) throw std::invalid_argument("critic_readout requires beta != 0");
  std::vector<Real> q(qbar.size());
  for (size_t i = 0; i < qbar.size(); ++i) {
    if (!(qbar[i] > Real(0)))
      throw std::domain_error("critic_readout requires positive Qbar values");
    q[i] = std::log(qbar[i]) / beta;
  }
  return q;
}

/// Critic target in exponentiated-value space (the variant that learns Qbar
/// with softplus critics):
///   Qbar_hat = exp(beta*r + beta*gamma*alpha*H') * sum_a' pi(a'|s') Qbar(a')^gamma,
/// with every term after exp(beta*r) set to one on done transitions. The twin
/// minimum is taken on the Q read-out, i.e. max of the Qbar pair for beta < 0.
template <class Real>
Real qbar_target(Real reward, bool done, std::span<const Real> pi_next,
                 std::span<const Real> qbar_next_1, std::span<const Real> qbar_next_2,
                 const RiskParams& rp) {
  if (rp.beta == 0.0) throw std::invalid_argument("qbar_target requires beta != 0");
  if (done) return std::exp(rp.beta * reward);
  if (pi_next.size() != qbar_next_1.size() || pi_next.size() != qbar_next_2.size() ||
      pi_next.empty())
    throw std::invalid_argument("qbar_target: size mismatch");
  for (size_t a = 0; a < pi_next.size(); ++a)
    if (!(qbar_next_1[a] > Real(0)) || !(qbar_next_2[a] > Real(0)))
      throw std::domain_error("qbar_target requires positive critic outputs");
  const Real h = policy_entropy(pi_next);
  Real expectation = 0;
  for (size_t a = 0; a < pi_next.size(); ++a) {
    const Real used = rp.beta < 0 ? std::max(qbar_next_1[a], qbar_next_2[a])
                                  : std::min(qbar_next_1[a], qbar_next_2[a]);
    expectation += pi_next[a] * std::pow(used, static_cast<Real>(rp.gamma));
  }
  return std::exp(rp.beta * reward + rp.beta * rp.gamma * rp.alpha * h) * expectation;
}

}  // namespace rsac

#endif  // RSAC_RISK_HPP
