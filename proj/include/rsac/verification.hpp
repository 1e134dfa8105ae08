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

#ifndef RSAC_VERIFICATION_HPP
#define RSAC_VERIFICATION_HPP

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsac/net.hpp"
#include "rsac/risk.hpp"
#include "rsac/sac.hpp"
#include "rsac/seeding.hpp"
#include "rsac/tabular.hpp"

namespace rsac::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double metric = 0.0;  // the quantity the check is about (worst case seen)
  std::string details;
};

inline nlohmann::json to_json(const std::vector<CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results)
    arr.push_back({{"name", r.name}, {"pass", r.pass}, {"metric", r.metric}, {"details", r.details}});
  return arr;
}

namespace detail {

inline double naive_logsumexp(std::span<const double> w, std::span<const double> v,
                              double beta) {
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i) acc += w[i] * std::exp(beta * v[i]);
  return std::log(acc) / beta;
}

inline std::vector<double> random_simplex(Rng& rng, size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = 0.01 + next_uniform(rng);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

template <class F>
double fd_relative_error(F&& value_at, Eigen::VectorXd& params,
                         const Eigen::VectorXd& analytic, Rng& rng, int n_coords,
                         double h = 1e-5) {
  double worst = 0.0;
  for (int i = 0; i < n_coords; ++i) {
    const Eigen::Index k =
        static_cast<Eigen::Index>(next_below(rng, static_cast<std::uint64_t>(params.size())));
    const double orig = params[k];
    params[k] = orig + h;
    const double up = value_at();
    params[k] = orig - h;
    const double down = value_at();
    params[k] = orig;
    const double fd = (up - down) / (2.0 * h);
    const double rel = std::abs(analytic[k] - fd) /
                       std::max({1e-6, std::abs(analytic[k]), std::abs(fd)});
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace detail

/// Shifted log-sum-exp equals the naive formula where the naive one is
/// representable, and stays finite far beyond that.
inline CheckResult check_logsumexp_identity(int n_random, std::uint64_t seed) {
  Rng rng = make_rng(seed, "verify/logsumexp");
  double worst = 0.0;
  bool all_finite = true;
  for (int i = 0; i < n_random; ++i) {
    const size_t n = 2 + next_below(rng, 7);
    const std::vector<double> w = detail::random_simplex(rng, n);
    double beta = next_uniform_in(rng, 1e-3, 10.0);
    if (next_bernoulli(rng, 0.5)) beta = -beta;
    const double range = next_uniform_in(rng, 0.0, 50.0 / std::abs(beta));
    const double center = next_uniform_in(rng, -5.0, 5.0);
    std::vector<double> v(n);
    for (auto& x : v) x = center + next_uniform_in(rng, -0.5, 0.5) * range;
    const double stable = logsumexp_shifted<double>(w, v, beta);
    const double naive = detail::naive_logsumexp(w, v, beta);
    worst = std::max(worst, std::abs(stable - naive) / std::max(1.0, std::abs(naive)));
    // extreme spread: naive overflows, shifted must stay finite
    std::vector<double> v2(n);
    const double range2 = next_uniform_in(rng, 500.0, 600.0) / std::abs(beta);
    for (size_t j = 0; j < n; ++j)
      v2[j] = (j % 2 == 0 ? 0.5 : -0.5) * range2 + next_uniform_in(rng, -1.0, 1.0);
    if (!std::isfinite(logsumexp_shifted<double>(w, v2, beta))) all_finite = false;
  }
  CheckResult r;
  r.name = "logsumexp_identity";
  r.metric = worst;
  r.pass = worst <= 1e-9 && all_finite;
  std::ostringstream os;
  os << "max relative deviation from the naive formula " << worst
     << (all_finite ? "; finite on extreme spreads" : "; NON-FINITE on extreme spreads");
  r.details = os.str();
  return r;
}

/// As beta -> 0 the entropic target approaches the risk-neutral target.
inline CheckResult check_beta_zero_consistency(int n_transitions, std::uint64_t seed) {
  Rng rng = make_rng(seed, "verify/beta-zero");
  double worst = 0.0;
  for (int i = 0; i < n_transitions; ++i) {
    const size_t n = 5;
    const std::vector<double> pi = detail::random_simplex(rng, n);
    std::vector<double> logpi(n), q(n);
    for (size_t a = 0; a < n; ++a) {
      logpi[a] = std::log(pi[a]);
      q[a] = next_uniform_in(rng, -5.0, 5.0);
    }
    const double reward = next_uniform_in(rng, -2.0, 2.0);
    const bool done = next_bernoulli(rng, 0.1);
    const double alpha = next_bernoulli(rng, 0.5) ? 0.2 : 0.0;
    const double neutral = critic_target_neutral(reward, done, pi, logpi, q, alpha, 0.99);
    for (double beta : {1e-6, -1e-6}) {
      const double ent = entropic_target<double>(reward, done, pi, q, {beta, alpha, 0.99});
      worst = std::max(worst, std::abs(ent - neutral));
    }
  }
  CheckResult r;
  r.name = "beta_zero_consistency";
  r.metric = worst;
  r.pass = worst <= 1e-4;
  r.details = "max |entropic_target(beta=+-1e-6) - neutral target| = " + std::to_string(worst);
  return r;
}

/// Backward induction reproduces exact trajectory enumeration at gamma = 1.
inline CheckResult check_bellman_exactness(int n_mdps, std::uint64_t seed) {
  Rng rng = make_rng(seed, "verify/bellman");
  double worst = 0.0;
  for (int i = 0; i < n_mdps; ++i) {
    const oracle::TabularMDP mdp = oracle::random_mdp(rng, 4, 3, 4, 1.0);
    const oracle::TabularPolicy pol = oracle::random_policy(rng, mdp);
    for (double beta : {-1.0, -0.1, 0.1, 1.0})
      for (double alpha : {0.0, 0.5}) {
        const auto brute = oracle::brute_force_q(mdp, pol, beta, alpha);
        const auto bell = oracle::bellman_backward(mdp, pol, beta, alpha);
        for (size_t k = 0; k < brute.q0().size(); ++k)
          worst = std::max(worst, std::abs(brute.q0()[k] - bell.q0()[k]));
      }
  }
  CheckResult r;
  r.name = "bellman_exactness_gamma1";
  r.metric = worst;
  r.pass = worst <= 1e-10;
  r.details = "max |bellman_backward - brute_force_q| at gamma=1: " + std::to_string(worst);
  return r;
}

/// The recursion's approximation gap shrinks monotonically as gamma -> 1.
inline CheckResult check_gap_monotonicity(int n_mdps, std::uint64_t seed) {
  Rng rng = make_rng(seed, "verify/gap");
  const double beta = -0.5, alpha = 0.5;
  int violations = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < n_mdps; ++i) {
    oracle::TabularMDP mdp = oracle::random_mdp(rng, 4, 3, 4, 1.0);
    mdp.horizon = 3 + static_cast<int>(next_below(rng, 2));  // gap appears from horizon 3 on
    const oracle::TabularPolicy pol = oracle::random_policy(rng, mdp);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double gamma : {0.9, 0.99, 0.999}) {
      mdp.gamma = gamma;
      const auto brute = oracle::brute_force_q(mdp, pol, beta, alpha);
      const auto bell = oracle::bellman_backward(mdp, pol, beta, alpha);
      double gap = 0.0;
      for (size_t k = 0; k < brute.q0().size(); ++k)
        gap = std::max(gap, std::abs(brute.q0()[k] - bell.q0()[k]));
      if (gap >= prev) monotone = false;
      prev = gap;
      worst_gap = std::max(worst_gap, gap);
    }
    if (!monotone) ++violations;
  }
  CheckResult r;
  r.name = "approximation_gap_monotonicity";
  r.metric = static_cast<double>(violations);
  r.pass = violations == 0;
  std::ostringstream os;
  os << violations << "/" << n_mdps << " MDPs violate monotone gap decay; max gap "
     << worst_gap;
  r.details = os.str();
  return r;
}

/// Soft policy improvement margins on random MDPs at gamma = 1.
/// With `enforce` the margin is asserted against `tolerance`; otherwise the
/// margin is only reported (informational mode for large |beta|).
inline CheckResult check_policy_improvement(int n_mdps, double beta, double alpha,
                                            double tolerance, std::uint64_t seed,
                                            bool enforce = true) {
  Rng rng = make_rng(seed, "verify/improvement");
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_mdps; ++i) {
    const oracle::TabularMDP mdp = oracle::random_mdp(rng, 4, 3, 4, 1.0);
    const oracle::TabularPolicy pol = oracle::random_policy(rng, mdp);
    const auto rep = oracle::policy_improvement_check(mdp, pol, alpha, beta);
    min_margin = std::min(min_margin, rep.min_margin);
  }
  CheckResult r;
  std::ostringstream name;
  name << "policy_improvement_beta_" << beta;
  r.name = name.str();
  r.metric = min_margin;
  r.pass = !enforce || min_margin >= -tolerance;
  std::ostringstream os;
  os << "min margin over " << n_mdps << " MDPs: " << min_margin
     << (enforce ? "" : " (informational, beta not close to zero)");
  r.details = os.str();
  return r;
}

/// Halving beta shrinks the second-order Taylor gap by at least 3.5x.
/// The gap's leading terms are (beta^2/6)*k3 + (beta^3/24)*k4; the decay
/// ratio is only well-defined away from their near-cancellation, so the
/// generator resamples until one of the two terms dominates (the pure-skew
/// case decays ~4x, the symmetric case ~8x).
inline CheckResult check_taylor_expansion(int n_dists, std::uint64_t seed) {
  Rng rng = make_rng(seed, "verify/taylor");
  const double beta = 0.1;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_dists; ++i) {
    std::vector<oracle::Outcome> outcomes;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw std::runtime_error("taylor generator failed to converge");
      const size_t n = 3 + next_below(rng, 4);
      const std::vector<double> w = detail::random_simplex(rng, n);
      outcomes.clear();
      for (size_t j = 0; j < n; ++j)
        outcomes.push_back({w[j], next_uniform_in(rng, 0.0, 3.0)});
      double m1 = 0.0;
      for (const auto& o : outcomes) m1 += o.probability * o.value;
      double m2 = 0.0, m3 = 0.0, m4 = 0.0;
      for (const auto& o : outcomes) {
        const double d = o.value - m1;
        m2 += o.probability * d * d;
        m3 += o.probability * d * d * d;
        m4 += o.probability * d * d * d * d;
      }
      const double k3 = m3;
      const double k4 = m4 - 3.0 * m2 * m2;
      const double skew_term = std::abs(beta * beta / 6.0 * k3);
      const double kurt_term = std::abs(beta * beta * beta / 24.0 * k4);
      if ((skew_term >= 10.0 * kurt_term || kurt_term >= 10.0 * skew_term) &&
          skew_term + kurt_term > 1e-8)
        break;
    }
    const double gap_full = std::abs(oracle::taylor_check(outcomes, beta).gap);
    const double gap_half = std::abs(oracle::taylor_check(outcomes, beta / 2.0).gap);
    worst_ratio = std::min(worst_ratio, gap_full / std::max(gap_half, 1e-300));
  }
  CheckResult r;
  r.name = "taylor_expansion_decay";
  r.metric = worst_ratio;
  r.pass = worst_ratio >= 3.5;
  r.details = "min gap(0.1)/gap(0.05) ratio: " + std::to_string(worst_ratio);
  return r;
}

/// Analytic gradients of the policy loss and both critic-loss variants match
/// central finite differences (includes the L2 term).
inline CheckResult check_gradients(std::uint64_t seed, Trunk trunk = Trunk::Dense,
                                   int n_coords = 100) {
  Rng rng = make_rng(seed, "verify/gradients");
  const int batch = 4;
  const double l2 = 1e-4;
  NetworkBundle bundle = NetworkBundle::create(trunk, Head::Linear, l2,
                                               derive_seed(seed, "verify/nets"));
  const int features = bundle.actor.spec().input_size();
  Eigen::MatrixXd obs(features, batch);
  for (Eigen::Index i = 0; i < obs.size(); ++i)
    obs.data()[i] = next_uniform(rng);

  double worst = 0.0;

  {  // policy loss w.r.t. actor parameters
    LossAndGrad lg = policy_loss(obs, bundle, 0.2, TargetVariant::Neutral, 0.0);
    add_l2_gradient(bundle.actor, lg.grad);
    auto value = [&]() {
      Workspace ws;
      const Eigen::MatrixXd& probs = bundle.actor.forward(obs, ws);
      const Eigen::MatrixXd logp = rsac::detail::log_softmax(ws.logits);
      const Eigen::MatrixXd qmin =
          bundle.critic1.forward(obs).cwiseMin(bundle.critic2.forward(obs));
      const double loss = probs.cwiseProduct(0.2 * logp - qmin).sum() / batch;
      return loss + l2 * bundle.actor.params().squaredNorm();
    };
    worst = std::max(worst, detail::fd_relative_error(value, bundle.actor.params(),
                                                      lg.grad, rng, n_coords));
  }

  {  // linear-head critic loss
    Eigen::VectorXd targets(batch);
    std::vector<int> actions(batch);
    for (int b = 0; b < batch; ++b) {
      targets[b] = next_uniform_in(rng, -3.0, 3.0);
      actions[static_cast<size_t>(b)] = static_cast<int>(next_below(rng, 5));
    }
    LossAndGrad lg = critic_loss(obs, actions, targets, bundle.critic1, 2.0);
    add_l2_gradient(bundle.critic1, lg.grad);
    auto value = [&]() {
      const Eigen::MatrixXd q = bundle.critic1.forward(obs);
      double loss = 0.0;
      for (int b = 0; b < batch; ++b)
        loss += huber(q(actions[static_cast<size_t>(b)], b) - targets[b], 2.0);
      return loss / batch + l2 * bundle.critic1.params().squaredNorm();
    };
    worst = std::max(worst, detail::fd_relative_error(value, bundle.critic1.params(),
                                                      lg.grad, rng, n_coords));
  }

  {  // softplus-head critic loss (exponentiated-value variant)
    ArchitectureSpec spec{trunk, Head::Softplus};
    spec.l2_coefficient = l2;
    Network qbar_critic(spec);
    qbar_critic.init_params(derive_seed(seed, "verify/qbar"));
    Eigen::VectorXd targets(batch);
    std::vector<int> actions(batch);
    for (int b = 0; b < batch; ++b) {
      targets[b] = next_uniform_in(rng, 0.1, 3.0);
      actions[static_cast<size_t>(b)] = static_cast<int>(next_below(rng, 5));
    }
    LossAndGrad lg = critic_loss(obs, actions, targets, qbar_critic, 2.0);
    add_l2_gradient(qbar_critic, lg.grad);
    auto value = [&]() {
      const Eigen::MatrixXd q = qbar_critic.forward(obs);
      double loss = 0.0;
      for (int b = 0; b < batch; ++b)
        loss += huber(q(actions[static_cast<size_t>(b)], b) - targets[b], 2.0);
      return loss / batch + l2 * qbar_critic.params().squaredNorm();
    };
    worst = std::max(worst, detail::fd_relative_error(value, qbar_critic.params(),
                                                      lg.grad, rng, n_coords));
  }

  CheckResult r;
  r.name = trunk == Trunk::Dense ? "gradient_check_dense" : "gradient_check_conv";
  r.metric = worst;
  r.pass = worst <= 1e-3;
  r.details = "max relative error vs central differences: " + std::to_string(worst);
  return r;
}

}  // namespace rsac::verify

#endif  // RSAC_VERIFICATION_HPP
