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

#ifndef RSAC_TABULAR_HPP
#define RSAC_TABULAR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsac/risk.hpp"
#include "rsac/seeding.hpp"

namespace rsac::oracle {

/// Small enumerable finite-horizon MDP used as ground truth.
struct TabularMDP {
  int n_states = 0;
  int n_actions = 0;
  int horizon = 1;
  double gamma = 1.0;
  std::vector<double> transition;  // p(s'|s,a), index ((s*A + a)*S + s')
  std::vector<double> reward;      // r(s,a), index s*A + a

  double p(int s, int a, int s2) const {
    return transition[(static_cast<size_t>(s) * n_actions + a) * n_states + s2];
  }
  double r(int s, int a) const { return reward[static_cast<size_t>(s) * n_actions + a]; }

  void validate() const {
    if (n_states < 1 || n_actions < 1 || horizon < 1)
      throw std::invalid_argument("bad MDP shape");
    if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in (0,1]");
    for (int s = 0; s < n_states; ++s)
      for (int a = 0; a < n_actions; ++a) {
        double sum = 0.0;
        for (int s2 = 0; s2 < n_states; ++s2) {
          if (p(s, a, s2) < 0.0) throw std::invalid_argument("negative transition prob");
          sum += p(s, a, s2);
        }
        if (std::abs(sum - 1.0) > 1e-12)
          throw std::invalid_argument("transition row does not sum to 1");
        if (!std::isfinite(r(s, a))) throw std::invalid_argument("non-finite reward");
      }
  }
};

struct TabularPolicy {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> probs;  // pi(a|s), index s*A + a

  double pi(int s, int a) const { return probs[static_cast<size_t>(s) * n_actions + a]; }

  double entropy(int s) const {
    double h = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      const double q = pi(s, a);
      if (q > 0.0) h -= q * std::log(q);
    }
    return h;
  }
};

/// Q tables per time step: slices[t][(s,a)] with horizon steps to go at t=0.
struct QTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<std::vector<double>> slices;

  double q(int t, int s, int a) const {
    return slices[static_cast<size_t>(t)][static_cast<size_t>(s) * n_actions + a];
  }
  const std::vector<double>& q0() const { return slices.front(); }
};

struct Outcome {
  double probability = 0.0;
  double value = 0.0;
};

/// Entropic risk of a finite outcome distribution: (1/beta) log E[e^{beta V}]
/// for beta != 0, the plain expectation at beta == 0.
inline double entropic_risk(std::span<const Outcome> outcomes, double beta) {
  if (outcomes.empty()) throw std::invalid_argument("empty outcome list");
  if (beta == 0.0) {
    double mean = 0.0;
    for (const auto& o : outcomes) mean += o.probability * o.value;
    return mean;
  }
  double shift = outcomes[0].value;
  for (const auto& o : outcomes) shift = std::max(shift, o.value);
  double acc = 0.0;
  for (const auto& o : outcomes) acc += o.probability * std::exp(beta * (o.value - shift));
  return shift + std::log(acc) / beta;
}

struct TaylorCheck {
  double entropic = 0.0;
  double mean_variance = 0.0;  // E[R] + beta/2 * Var[R]
  double gap = 0.0;
};

/// Compares the entropic risk against its second-order expansion in beta.
inline TaylorCheck taylor_check(std::span<const Outcome> outcomes, double beta) {
  double mean = 0.0, second = 0.0;
  for (const auto& o : outcomes) {
    mean += o.probability * o.value;
    second += o.probability * o.value * o.value;
  }
  const double var = second - mean * mean;
  TaylorCheck out;
  out.entropic = entropic_risk(outcomes, beta);
  out.mean_variance = mean + 0.5 * beta * var;
  out.gap = out.entropic - out.mean_variance;
  return out;
}

namespace detail {

inline const TabularPolicy& policy_at(std::span<const TabularPolicy> policies, int t) {
  return policies[std::min(static_cast<size_t>(t), policies.size() - 1)];
}

inline void enumerate_trajectories(const TabularMDP& mdp,
                                   std::span<const TabularPolicy> policies, int s, int a,
                                   int depth, double prob, double acc, double alpha,
                                   std::vector<Outcome>& outcomes) {
  acc += std::pow(mdp.gamma, depth) * mdp.r(s, a);
  if (depth == mdp.horizon - 1) {
    outcomes.push_back({prob, acc});
    return;
  }
  const double disc = std::pow(mdp.gamma, depth + 1);
  const TabularPolicy& pol = policy_at(policies, depth + 1);
  for (int s2 = 0; s2 < mdp.n_states; ++s2) {
    const double p1 = mdp.p(s, a, s2);
    if (p1 == 0.0) continue;
    const double h = pol.entropy(s2);
    for (int a2 = 0; a2 < mdp.n_actions; ++a2) {
      const double p2 = pol.pi(s2, a2);
      if (p2 == 0.0) continue;
      enumerate_trajectories(mdp, policies, s2, a2, depth + 1, prob * p1 * p2,
                             acc + disc * alpha * h, alpha, outcomes);
    }
  }
}

}  // namespace detail

/// Exact Q-values by full trajectory enumeration: the entropic risk of the
/// regularized return r_0 + sum_{l>=1} gamma^l (r_l + alpha*H_l) from each
/// start pair (s,a). The reference oracle; exponential in the horizon.
inline QTable brute_force_q(const TabularMDP& mdp, std::span<const TabularPolicy> policies,
                            double beta, double alpha) {
  mdp.validate();
  double count = static_cast<double>(mdp.n_states) * mdp.n_actions;
  for (int t = 1; t < mdp.horizon; ++t) count *= mdp.n_states * mdp.n_actions;
  if (count > 1e7) throw std::invalid_argument("trajectory count exceeds 1e7");

  QTable table{mdp.n_states, mdp.n_actions, {}};
  table.slices.resize(1);
  auto& q0 = table.slices[0];
  q0.resize(static_cast<size_t>(mdp.n_states) * mdp.n_actions);
  std::vector<Outcome> outcomes;
  for (int s = 0; s < mdp.n_states; ++s)
    for (int a = 0; a < mdp.n_actions; ++a) {
      outcomes.clear();
      detail::enumerate_trajectories(mdp, policies, s, a, 0, 1.0, 0.0, alpha, outcomes);
      q0[static_cast<size_t>(s) * mdp.n_actions + a] = entropic_risk(outcomes, beta);
    }
  return table;
}

inline QTable brute_force_q(const TabularMDP& mdp, const TabularPolicy& policy, double beta,
                            double alpha) {
  return brute_force_q(mdp, std::span<const TabularPolicy>(&policy, 1), beta, alpha);
}

/// Backward-induction Q-values under the recursion
///   Q_t(s,a) = r(s,a) + (1/beta) log E_{s',a'}[exp(beta*gamma*(alpha*H(s') + Q_{t+1}(s',a')))],
/// the sampling-free form of the practical critic target. Exact at gamma = 1;
/// for gamma < 1 it carries the E[X^gamma] ~ E[X]^gamma approximation gap.
inline QTable bellman_backward(const TabularMDP& mdp,
                               std::span<const TabularPolicy> policies, double beta,
                               double alpha) {
  mdp.validate();
  QTable table{mdp.n_states, mdp.n_actions, {}};
  table.slices.assign(static_cast<size_t>(mdp.horizon),
                      std::vector<double>(static_cast<size_t>(mdp.n_states) * mdp.n_actions));
  for (int t = mdp.horizon - 1; t >= 0; --t) {
    auto& slice = table.slices[static_cast<size_t>(t)];
    for (int s = 0; s < mdp.n_states; ++s)
      for (int a = 0; a < mdp.n_actions; ++a) {
        if (t == mdp.horizon - 1) {
          slice[static_cast<size_t>(s) * mdp.n_actions + a] = mdp.r(s, a);
          continue;
        }
        const TabularPolicy& pol = detail::policy_at(policies, t + 1);
        const auto& next = table.slices[static_cast<size_t>(t) + 1];
        std::vector<Outcome> outcomes;
        for (int s2 = 0; s2 < mdp.n_states; ++s2) {
          const double p1 = mdp.p(s, a, s2);
          if (p1 == 0.0) continue;
          const double h = pol.entropy(s2);
          for (int a2 = 0; a2 < mdp.n_actions; ++a2) {
            const double p2 = pol.pi(s2, a2);
            if (p2 == 0.0) continue;
            outcomes.push_back(
                {p1 * p2,
                 mdp.gamma * (alpha * h + next[static_cast<size_t>(s2) * mdp.n_actions + a2])});
          }
        }
        slice[static_cast<size_t>(s) * mdp.n_actions + a] =
            mdp.r(s, a) + entropic_risk(outcomes, beta);
      }
  }
  return table;
}

inline QTable bellman_backward(const TabularMDP& mdp, const TabularPolicy& policy,
                               double beta, double alpha) {
  return bellman_backward(mdp, std::span<const TabularPolicy>(&policy, 1), beta, alpha);
}

/// KL projection onto exp(Q/alpha)/Z over unconstrained tabular policies:
/// the rowwise softmax of Q/alpha, computed with max shift.
inline TabularPolicy improve_policy(const std::vector<double>& q, int n_states,
                                    int n_actions, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("improve_policy requires alpha > 0");
  TabularPolicy pol{n_states, n_actions,
                    std::vector<double>(static_cast<size_t>(n_states) * n_actions)};
  for (int s = 0; s < n_states; ++s) {
    double m = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_actions; ++a)
      m = std::max(m, q[static_cast<size_t>(s) * n_actions + a]);
    double z = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      const double e = std::exp((q[static_cast<size_t>(s) * n_actions + a] - m) / alpha);
      pol.probs[static_cast<size_t>(s) * n_actions + a] = e;
      z += e;
    }
    for (int a = 0; a < n_actions; ++a)
      pol.probs[static_cast<size_t>(s) * n_actions + a] /= z;
  }
  return pol;
}

struct ImprovementReport {
  double min_margin = 0.0;  // min over t,(s,a) of Q_new - Q_old
  double max_margin = 0.0;
};

/// Soft policy improvement check: evaluates pi_old, improves every time
/// slice through the softmax projection, re-evaluates, and reports the worst
/// improvement margin over all (t, s, a).
inline ImprovementReport policy_improvement_check(const TabularMDP& mdp,
                                                  const TabularPolicy& pi_old, double alpha,
                                                  double beta) {
  const QTable q_old = bellman_backward(mdp, pi_old, beta, alpha);
  std::vector<TabularPolicy> pi_new;
  pi_new.reserve(q_old.slices.size());
  for (const auto& slice : q_old.slices)
    pi_new.push_back(improve_policy(slice, mdp.n_states, mdp.n_actions, alpha));
  const QTable q_new = bellman_backward(mdp, pi_new, beta, alpha);
  ImprovementReport rep;
  bool first = true;
  for (size_t t = 0; t < q_old.slices.size(); ++t)
    for (size_t i = 0; i < q_old.slices[t].size(); ++i) {
      const double margin = q_new.slices[t][i] - q_old.slices[t][i];
      if (first || margin < rep.min_margin) rep.min_margin = margin;
      if (first || margin > rep.max_margin) rep.max_margin = margin;
      first = false;
    }
  return rep;
}

// --- random instances for property sweeps ---

inline TabularMDP random_mdp(Rng& rng, int max_states = 4, int max_actions = 3,
                             int max_horizon = 4, double gamma = 1.0) {
  TabularMDP mdp;
  mdp.n_states = 2 + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(max_states - 1)));
  mdp.n_actions = 2 + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(max_actions - 1)));
  mdp.horizon = 2 + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(max_horizon - 1)));
  mdp.gamma = gamma;
  mdp.transition.resize(static_cast<size_t>(mdp.n_states) * mdp.n_actions * mdp.n_states);
  mdp.reward.resize(static_cast<size_t>(mdp.n_states) * mdp.n_actions);
  for (int s = 0; s < mdp.n_states; ++s)
    for (int a = 0; a < mdp.n_actions; ++a) {
      double sum = 0.0;
      for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        const double w = 0.05 + next_uniform(rng);
        mdp.transition[(static_cast<size_t>(s) * mdp.n_actions + a) * mdp.n_states + s2] = w;
        sum += w;
      }
      for (int s2 = 0; s2 < mdp.n_states; ++s2)
        mdp.transition[(static_cast<size_t>(s) * mdp.n_actions + a) * mdp.n_states + s2] /= sum;
      mdp.reward[static_cast<size_t>(s) * mdp.n_actions + a] = next_uniform_in(rng, -1.0, 1.0);
    }
  return mdp;
}

inline TabularPolicy random_policy(Rng& rng, const TabularMDP& mdp) {
  TabularPolicy pol{mdp.n_states, mdp.n_actions,
                    std::vector<double>(static_cast<size_t>(mdp.n_states) * mdp.n_actions)};
  for (int s = 0; s < mdp.n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double w = 0.05 + next_uniform(rng);
      pol.probs[static_cast<size_t>(s) * mdp.n_actions + a] = w;
      sum += w;
    }
    for (int a = 0; a < mdp.n_actions; ++a)
      pol.probs[static_cast<size_t>(s) * mdp.n_actions + a] /= sum;
  }
  return pol;
}

}  // namespace rsac::oracle

#endif  // RSAC_TABULAR_HPP
