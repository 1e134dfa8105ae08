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

#ifndef RSAC_SAC_HPP
#define RSAC_SAC_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsac/bundle.hpp"
#include "rsac/net.hpp"
#include "rsac/risk.hpp"

namespace rsac {

/// Critic-target rule. Auto resolves to Neutral when beta == 0 and to
/// Entropic otherwise. Qbar is the exponentiated-value variant and requires
/// softplus critics.
enum class TargetVariant { Auto, Neutral, Entropic, Qbar };

inline TargetVariant resolve_variant(TargetVariant v, double beta) {
  if (v == TargetVariant::Auto) return beta == 0.0 ? TargetVariant::Neutral : TargetVariant::Entropic;
  return v;
}

inline const char* variant_name(TargetVariant v) {
  switch (v) {
    case TargetVariant::Auto: return "auto";
    case TargetVariant::Neutral: return "neutral";
    case TargetVariant::Entropic: return "entropic";
    case TargetVariant::Qbar: return "qbar";
  }
  return "?";
}

/// One sampled update batch, observations column-per-sample.
struct Batch {
  Eigen::MatrixXd s;       // (features x B)
  Eigen::MatrixXd s_next;  // (features x B)
  std::vector<int> a;
  Eigen::VectorXd r;  // normalized rewards
  std::vector<bool> d;

  Eigen::Index size() const { return s.cols(); }
};

namespace detail {

/// Row-stable log-softmax of logits, columnwise.
inline Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    const double lse = m + std::log((z.col(c).array() - m).exp().sum());
    out.col(c) = z.col(c).array() - lse;
  }
  return out;
}

}  // namespace detail

// --- Huber loss (critic regression) ---

inline double huber(double residual, double delta) {
  const double a = std::abs(residual);
  return a <= delta ? 0.5 * residual * residual : delta * a - 0.5 * delta * delta;
}

inline double huber_grad(double residual, double delta) {
  return residual > delta ? delta : (residual < -delta ? -delta : residual);
}

// --- policy loss ---

struct LossAndGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

/// J_pi = E_s[ pi(s)^T (alpha*log pi(s) - Q(s)) ] with Q the elementwise
/// minimum of the twin critics (read out through (1/beta)*log for the Qbar
/// variant). Gradient w.r.t. actor parameters only; critics held constant.
inline LossAndGrad policy_loss(const Eigen::MatrixXd& obs, NetworkBundle& bundle,
                               double alpha, TargetVariant variant, double beta) {
  variant = resolve_variant(variant, beta);
  const Eigen::Index batch = obs.cols();
  Workspace ws;
  const Eigen::MatrixXd& probs = bundle.actor.forward(obs, ws);
  const Eigen::MatrixXd logp = detail::log_softmax(ws.logits);

  Eigen::MatrixXd q1 = bundle.critic1.forward(obs);
  Eigen::MatrixXd q2 = bundle.critic2.forward(obs);
  Eigen::MatrixXd qmin(q1.rows(), q1.cols());
  if (variant == TargetVariant::Qbar) {
    for (Eigen::Index c = 0; c < q1.cols(); ++c)
      for (Eigen::Index a = 0; a < q1.rows(); ++a) {
        if (!(q1(a, c) > 0.0) || !(q2(a, c) > 0.0))
          throw std::domain_error("Qbar policy loss requires positive critic outputs");
        qmin(a, c) = std::min(std::log(q1(a, c)) / beta, std::log(q2(a, c)) / beta);
      }
  } else {
    qmin = q1.cwiseMin(q2);
  }

  const Eigen::MatrixXd u = alpha * logp - qmin;
  const double loss = (probs.cwiseProduct(u)).sum() / static_cast<double>(batch);
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite policy loss");

  // d loss / d probs; the softmax jacobian is applied by backward().
  const Eigen::MatrixXd dprobs =
      (u.array() + alpha).matrix() / static_cast<double>(batch);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(bundle.actor.n_params());
  bundle.actor.backward(dprobs, ws, grad);
  return {loss, std::move(grad)};
}

// --- critic targets ---

/// Risk-neutral target for a single transition:
///   Qhat = r + (1-d) * gamma * pi(s')^T (min_i Q_target_i(s') - alpha*log pi(s')).
inline double critic_target_neutral(double reward, bool done,
                                    std::span<const double> pi_next,
                                    std::span<const double> logpi_next,
                                    std::span<const double> q_next_min, double alpha,
                                    double gamma) {
  if (done) return reward;
  double v = 0.0;
  for (size_t a = 0; a < pi_next.size(); ++a)
    v += pi_next[a] * (q_next_min[a] - alpha * logpi_next[a]);
  return reward + gamma * v;
}

/// Batched targets for all three variants. Rewards in `batch.r` are already
/// normalized. Uses the target critics and the current actor.
inline Eigen::VectorXd compute_targets(const Batch& batch, NetworkBundle& bundle,
                                       double alpha, double gamma,
                                       TargetVariant variant, double beta) {
  variant = resolve_variant(variant, beta);
  const Eigen::Index n = batch.size();
  Workspace ws;
  const Eigen::MatrixXd& pi_next = bundle.actor.forward(batch.s_next, ws);
  const Eigen::MatrixXd logpi_next = detail::log_softmax(ws.logits);
  const Eigen::MatrixXd t1 = bundle.target1.forward(batch.s_next);
  const Eigen::MatrixXd t2 = bundle.target2.forward(batch.s_next);
  const int na = static_cast<int>(t1.rows());

  Eigen::VectorXd targets(n);
  const RiskParams rp{beta, alpha, gamma};
  for (Eigen::Index b = 0; b < n; ++b) {
    std::span<const double> pi(pi_next.col(b).data(), static_cast<size_t>(na));
    switch (variant) {
      case TargetVariant::Neutral: {
        Eigen::VectorXd qmin = t1.col(b).cwiseMin(t2.col(b));
        targets[b] = critic_target_neutral(
            batch.r[b], batch.d[static_cast<size_t>(b)], pi,
            {logpi_next.col(b).data(), static_cast<size_t>(na)},
            {qmin.data(), static_cast<size_t>(na)}, alpha, gamma);
        break;
      }
      case TargetVariant::Entropic: {
        Eigen::VectorXd qmin = t1.col(b).cwiseMin(t2.col(b));
        targets[b] =
            entropic_target<double>(batch.r[b], batch.d[static_cast<size_t>(b)], pi,
                                    {qmin.data(), static_cast<size_t>(na)}, rp);
        break;
      }
      case TargetVariant::Qbar:
        targets[b] = qbar_target<double>(
            batch.r[b], batch.d[static_cast<size_t>(b)], pi,
            {t1.col(b).data(), static_cast<size_t>(na)},
            {t2.col(b).data(), static_cast<size_t>(na)}, rp);
        break;
      case TargetVariant::Auto:
        throw std::logic_error("unresolved variant");
    }
    if (!std::isfinite(targets[b])) throw std::runtime_error("non-finite critic target");
  }
  return targets;
}

/// Mean Huber loss of one critic against fixed targets, with its gradient.
inline LossAndGrad critic_loss(const Eigen::MatrixXd& obs, const std::vector<int>& actions,
                               const Eigen::VectorXd& targets, Network& critic,
                               double huber_delta) {
  const Eigen::Index batch = obs.cols();
  Workspace ws;
  const Eigen::MatrixXd& q = critic.forward(obs, ws);
  double loss = 0.0;
  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double res = q(actions[static_cast<size_t>(b)], b) - targets[b];
    loss += huber(res, huber_delta);
    dq(actions[static_cast<size_t>(b)], b) =
        huber_grad(res, huber_delta) / static_cast<double>(batch);
  }
  loss /= static_cast<double>(batch);
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite critic loss");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(critic.n_params());
  critic.backward(dq, ws, grad);
  return {loss, std::move(grad)};
}

}  // namespace rsac

#endif  // RSAC_SAC_HPP
