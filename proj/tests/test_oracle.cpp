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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rsac/tabular.hpp"
#include "rsac/verification.hpp"

using namespace rsac;
using namespace rsac::oracle;

namespace {

// two states, deterministic ring, fixed rewards; useful closed-form case
TabularMDP deterministic_chain(int horizon, double gamma) {
  TabularMDP mdp;
  mdp.n_states = 2;
  mdp.n_actions = 2;
  mdp.horizon = horizon;
  mdp.gamma = gamma;
  mdp.transition = {
      // s=0: a=0 -> s=1, a=1 -> s=0
      0.0, 1.0, 1.0, 0.0,
      // s=1: a=0 -> s=0, a=1 -> s=1
      1.0, 0.0, 0.0, 1.0};
  mdp.reward = {1.0, -0.5, 2.0, 0.25};
  return mdp;
}

TabularPolicy onehot_policy(const TabularMDP& mdp, int action) {
  TabularPolicy pol{mdp.n_states, mdp.n_actions,
                    std::vector<double>(static_cast<size_t>(mdp.n_states) * mdp.n_actions, 0.0)};
  for (int s = 0; s < mdp.n_states; ++s)
    pol.probs[static_cast<size_t>(s) * mdp.n_actions + action] = 1.0;
  return pol;
}

}  // namespace

TEST_CASE("entropic risk closed forms") {
  std::vector<Outcome> point{{1.0, 5.0}};
  for (double beta : {-2.0, -0.1, 0.0, 0.1, 2.0})
    CHECK(entropic_risk(point, beta) == Catch::Approx(5.0).margin(1e-12));

  std::vector<Outcome> coin{{0.5, 0.0}, {0.5, 10.0}};
  CHECK(entropic_risk(coin, 0.0) == Catch::Approx(5.0).margin(1e-12));
  CHECK(entropic_risk(coin, -0.1) == Catch::Approx(3.7988549304172244).margin(1e-12));
}

TEST_CASE("entropic risk is monotone in beta and respects Jensen") {
  Rng rng = make_rng(30, "oracle");
  for (int i = 0; i < 100; ++i) {
    const size_t n = 2 + next_below(rng, 5);
    std::vector<Outcome> outcomes;
    double sum = 0.0, lo = 1e9, hi = -1e9, mean = 0.0;
    for (size_t j = 0; j < n; ++j) outcomes.push_back({0.05 + next_uniform(rng), next_uniform_in(rng, -4.0, 4.0)});
    for (auto& o : outcomes) sum += o.probability;
    for (auto& o : outcomes) {
      o.probability /= sum;
      lo = std::min(lo, o.value);
      hi = std::max(hi, o.value);
      mean += o.probability * o.value;
    }
    double prev = -1e18;
    for (double beta : {-4.0, -1.0, -0.1, 0.1, 1.0, 4.0}) {
      const double v = entropic_risk(outcomes, beta);
      CHECK(v >= prev - 1e-12);
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
      if (beta < 0) CHECK(v <= mean + 1e-12);
      if (beta > 0) CHECK(v >= mean - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("taylor expansion gap vanishes for deterministic outcomes") {
  std::vector<Outcome> point{{1.0, 2.5}};
  const auto c = taylor_check(point, 0.1);
  CHECK(c.gap == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("taylor gap decays when halving beta on the spec coin flip") {
  std::vector<Outcome> coin{{0.5, 0.0}, {0.5, 1.0}};
  const double g1 = std::abs(taylor_check(coin, 0.1).gap);
  const double g2 = std::abs(taylor_check(coin, 0.05).gap);
  CHECK(g2 <= g1 / 3.5);
}

TEST_CASE("brute force at horizon one returns the reward table") {
  Rng rng = make_rng(31, "oracle");
  TabularMDP mdp = random_mdp(rng, 4, 3, 4, 1.0);
  mdp.horizon = 1;
  const TabularPolicy pol = random_policy(rng, mdp);
  const auto q = brute_force_q(mdp, pol, -0.7, 0.4);
  for (int s = 0; s < mdp.n_states; ++s)
    for (int a = 0; a < mdp.n_actions; ++a)
      CHECK(q.q0()[static_cast<size_t>(s) * mdp.n_actions + a] ==
            Catch::Approx(mdp.r(s, a)).margin(1e-12));
  const auto b = bellman_backward(mdp, pol, -0.7, 0.4);
  CHECK(b.q0() == q.q0());
}

TEST_CASE("risk collapses to the discounted sum on deterministic chains") {
  const double gamma = 0.9;
  const TabularMDP mdp = deterministic_chain(4, gamma);
  const TabularPolicy pol = onehot_policy(mdp, 0);  // alternates 0 -> 1 -> 0 -> 1
  // rewards along (s=0, a=0): 1, then from s=1: 2, then 1, then 2
  const double expected = 1.0 + gamma * 2.0 + gamma * gamma * 1.0 + gamma * gamma * gamma * 2.0;
  for (double beta : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    const auto q = brute_force_q(mdp, pol, beta, 0.0);
    CHECK(q.q0()[0] == Catch::Approx(expected).margin(1e-10));
  }
}

TEST_CASE("bellman backward equals enumeration at gamma one") {
  Rng rng = make_rng(32, "oracle");
  for (int i = 0; i < 25; ++i) {
    const TabularMDP mdp = random_mdp(rng, 4, 3, 4, 1.0);
    const TabularPolicy pol = random_policy(rng, mdp);
    for (double beta : {-0.5, 0.8})
      for (double alpha : {0.0, 0.5}) {
        const auto brute = brute_force_q(mdp, pol, beta, alpha);
        const auto bell = bellman_backward(mdp, pol, beta, alpha);
        for (size_t k = 0; k < brute.q0().size(); ++k)
          CHECK(bell.q0()[k] == Catch::Approx(brute.q0()[k]).margin(1e-10));
      }
  }
}

TEST_CASE("approximation gap shrinks as gamma approaches one") {
  const auto res = verify::check_gap_monotonicity(25, 1234);
  INFO(res.details);
  CHECK(res.pass);
}

TEST_CASE("improve_policy closed forms") {
  // constant Q rows give the uniform policy
  const std::vector<double> q_const{1.5, 1.5, 1.5, 1.5};
  const auto uniform = improve_policy(q_const, 2, 2, 0.7);
  for (double p : uniform.probs) CHECK(p == Catch::Approx(0.5).margin(1e-12));

  // bandit with Q = (1, 0) and alpha = 1: (e/(1+e), 1/(1+e))
  const std::vector<double> q_bandit{1.0, 0.0};
  const auto bandit = improve_policy(q_bandit, 1, 2, 1.0);
  CHECK(bandit.probs[0] == Catch::Approx(0.7310585786300049).margin(1e-12));
  CHECK(bandit.probs[1] == Catch::Approx(0.2689414213699951).margin(1e-12));

  // temperature limits
  const auto hot = improve_policy(q_bandit, 1, 2, 1e6);
  CHECK(hot.probs[0] == Catch::Approx(0.5).margin(1e-5));
  const auto cold = improve_policy(q_bandit, 1, 2, 1e-6);
  CHECK(cold.probs[0] > 0.999999);

  CHECK_THROWS_AS(improve_policy(q_bandit, 1, 2, 0.0), std::invalid_argument);
}

TEST_CASE("improve_policy rows sum to one and obey the scaling identity") {
  Rng rng = make_rng(33, "oracle");
  for (int i = 0; i < 50; ++i) {
    const int ns = 3, na = 3;
    std::vector<double> q(static_cast<size_t>(ns) * na);
    for (auto& x : q) x = next_uniform_in(rng, -3.0, 3.0);
    const double alpha = next_uniform_in(rng, 0.1, 2.0);
    const double c = next_uniform_in(rng, 0.5, 4.0);
    const auto a = improve_policy(q, ns, na, alpha);
    std::vector<double> qc = q;
    for (auto& x : qc) x *= c;
    const auto b = improve_policy(qc, ns, na, alpha * c);
    for (int s = 0; s < ns; ++s) {
      double sum = 0.0;
      for (int k = 0; k < na; ++k) sum += a.probs[static_cast<size_t>(s) * na + k];
      CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    }
    for (size_t k = 0; k < q.size(); ++k)
      CHECK(a.probs[k] == Catch::Approx(b.probs[k]).margin(1e-12));
  }
}

TEST_CASE("a softmax fixed point has zero improvement margin") {
  Rng rng = make_rng(34, "oracle");
  TabularMDP mdp = random_mdp(rng, 4, 3, 4, 1.0);
  mdp.horizon = 1;  // Q == r regardless of the policy, so the softmax is a fixed point
  const double alpha = 0.6;
  const TabularPolicy pi_star = improve_policy(mdp.reward, mdp.n_states, mdp.n_actions, alpha);
  const auto rep = policy_improvement_check(mdp, pi_star, alpha, -0.05);
  CHECK(std::abs(rep.min_margin) <= 1e-8);
  CHECK(std::abs(rep.max_margin) <= 1e-8);
}

TEST_CASE("soft policy improvement holds on random MDPs") {
  const auto near_zero = verify::check_policy_improvement(100, -0.01, 0.5, 1e-4, 77);
  INFO(near_zero.details);
  CHECK(near_zero.pass);
  const auto neutral = verify::check_policy_improvement(100, 0.0, 0.5, 1e-10, 78);
  INFO(neutral.details);
  CHECK(neutral.pass);
}

TEST_CASE("improvement margins are reported without assertion far from zero") {
  const auto info = verify::check_policy_improvement(20, -5.0, 0.5, 1e-4, 79, false);
  CHECK(info.pass);  // informational mode never fails
  CHECK(std::isfinite(info.metric));
}

TEST_CASE("trajectory explosion is rejected") {
  TabularMDP mdp;
  mdp.n_states = 6;
  mdp.n_actions = 3;
  mdp.horizon = 6;
  mdp.gamma = 1.0;
  mdp.transition.assign(static_cast<size_t>(6) * 3 * 6, 1.0 / 6.0);
  mdp.reward.assign(static_cast<size_t>(6) * 3, 0.0);
  Rng rng = make_rng(35, "oracle");
  const TabularPolicy pol = random_policy(rng, mdp);
  CHECK_THROWS_AS(brute_force_q(mdp, pol, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("MDP validation rejects malformed tables") {
  TabularMDP mdp = deterministic_chain(3, 1.0);
  mdp.transition[0] = 0.5;  // row no longer sums to one
  CHECK_THROWS_AS(mdp.validate(), std::invalid_argument);
}
