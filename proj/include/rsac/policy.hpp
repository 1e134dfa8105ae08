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

#ifndef RSAC_POLICY_HPP
#define RSAC_POLICY_HPP

#include <functional>

#include "rsac/dataset.hpp"
#include "rsac/environment.hpp"
#include "rsac/greedy.hpp"
#include "rsac/net.hpp"
#include "rsac/observation.hpp"
#include "rsac/seeding.hpp"

namespace rsac {

using PolicyFn = std::function<Action(const EnvState&)>;

inline PolicyFn greedy_policy(const GridConfig& cfg) {
  return [&cfg](const EnvState& s) { return greedy_action(s, cfg); };
}

inline PolicyFn stay_policy() {
  return [](const EnvState&) { return Action::Stay; };
}

inline Eigen::VectorXd action_probabilities(const Network& actor, const EnvState& s,
                                            const GridConfig& cfg) {
  return actor.forward(observation_column(encode_state(s, cfg))).col(0);
}

/// Deterministic evaluation policy: argmax of the actor probabilities,
/// lowest action index on ties.
inline PolicyFn actor_argmax_policy(const Network& actor, const GridConfig& cfg) {
  return [&actor, &cfg](const EnvState& s) {
    const Eigen::VectorXd p = action_probabilities(actor, s, cfg);
    Eigen::Index best = 0;
    for (Eigen::Index a = 1; a < p.size(); ++a)
      if (p[a] > p[best]) best = a;
    return static_cast<Action>(best);
  };
}

/// Stochastic policy drawing from the actor distribution (training-style
/// action selection, available behind a flag for evaluation).
inline PolicyFn actor_sampling_policy(const Network& actor, const GridConfig& cfg,
                                      Rng& rng) {
  return [&actor, &cfg, &rng](const EnvState& s) {
    const Eigen::VectorXd p = action_probabilities(actor, s, cfg);
    const double u = next_uniform(rng);
    double acc = 0.0;
    for (Eigen::Index a = 0; a < p.size(); ++a) {
      acc += p[a];
      if (u < acc) return static_cast<Action>(a);
    }
    return static_cast<Action>(p.size() - 1);
  };
}

/// Undiscounted return of one schedule under `policy`.
inline double rollout_return(const GridConfig& cfg, const EpisodeSchedule& schedule,
                             const PolicyFn& policy) {
  Episode ep(cfg, schedule);
  double total = 0.0;
  while (!ep.done()) total += ep.step(policy(ep.state())).reward;
  return total;
}

/// Mean undiscounted return over all episodes of a dataset.
inline double mean_return(const GridConfig& cfg, const EpisodeDataset& ds,
                          const PolicyFn& policy) {
  double total = 0.0;
  for (const auto& schedule : ds.episodes) total += rollout_return(cfg, schedule, policy);
  return ds.episodes.empty() ? 0.0 : total / static_cast<double>(ds.episodes.size());
}

}  // namespace rsac

#endif  // RSAC_POLICY_HPP
