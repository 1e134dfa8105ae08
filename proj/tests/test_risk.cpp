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
#include <vector>

#include "rsac/risk.hpp"
#include "rsac/sac.hpp"
#include "rsac/seeding.hpp"

using namespace rsac;

namespace {

struct RandomTransition {
  double reward;
  std::vector<double> pi;
  std::vector<double> logpi;
  std::vector<double> q;
};

RandomTransition random_transition(Rng& rng, double q_range = 5.0) {
  RandomTransition t;
  t.reward = next_uniform_in(rng, -2.0, 2.0);
  double sum = 0.0;
  for (int a = 0; a < 5; ++a) {
    t.pi.push_back(0.01 + next_uniform(rng));
    sum += t.pi.back();
  }
  for (auto& p : t.pi) p /= sum;
  for (const auto& p : t.pi) t.logpi.push_back(std::log(p));
  for (int a = 0; a < 5; ++a) t.q.push_back(next_uniform_in(rng, -q_range, q_range));
  return t;
}

// the pre-rewrite formula, valid only while nothing overflows
double naive_entropic_target(const RandomTransition& t, const RiskParams& rp) {
  const double h = policy_entropy<double>(t.pi);
  double acc = 0.0;
  for (size_t a = 0; a < t.pi.size(); ++a)
    acc += t.pi[a] *
           std::exp(rp.beta * (t.reward + rp.gamma * (t.q[a] + rp.alpha * h)));
  return std::log(acc) / rp.beta;
}

}  // namespace

TEST_CASE("logsumexp_shifted closed-form cases") {
  std::vector<double> w1{1.0}, v1{4.2};
  CHECK(logsumexp_shifted<double>(w1, v1, -0.7) == Catch::Approx(4.2).margin(1e-12));

  std::vector<double> w2{0.25, 0.25, 0.25, 0.25}, v2{3.0, 3.0, 3.0, 3.0};
  CHECK(logsumexp_shifted<double>(w2, v2, 2.0) == Catch::Approx(3.0).margin(1e-12));

  // (1/-0.1) * ln(0.5 * (1 + e^{-1})), evaluated directly
  std::vector<double> w3{0.5, 0.5}, v3{0.0, 10.0};
  CHECK(logsumexp_shifted<double>(w3, v3, -0.1) ==
        Catch::Approx(3.7988549304172244).margin(1e-12));

  CHECK_THROWS_AS(logsumexp_shifted<double>(w3, v3, 0.0), std::invalid_argument);
}

TEST_CASE("logsumexp_shifted stays finite on extreme spreads") {
  std::vector<double> w{0.5, 0.5};
  for (double beta : {-10.0, -1.0, 1.0, 10.0}) {
    std::vector<double> v{-350.0 / std::abs(beta), 350.0 / std::abs(beta)};
    CHECK(std::isfinite(logsumexp_shifted<double>(w, v, beta)));
  }
}

TEST_CASE("one-hot next policy collapses the entropic target to the neutral one") {
  Rng rng = make_rng(14, "risk");
  for (int i = 0; i < 50; ++i) {
    RandomTransition t = random_transition(rng);
    t.pi = {0.0, 0.0, 1.0, 0.0, 0.0};
    t.logpi = {0.0, 0.0, 0.0, 0.0, 0.0};  // entropy terms vanish on the support
    const RiskParams rp{next_uniform_in(rng, -3.0, 3.0), 0.3, 0.99};
    if (rp.beta == 0.0) continue;
    const double expected = t.reward + rp.gamma * t.q[2];
    CHECK(entropic_target<double>(t.reward, false, t.pi, t.q, rp) ==
          Catch::Approx(expected).margin(1e-9));
    CHECK(critic_target_neutral(t.reward, false, t.pi, t.logpi, t.q, rp.alpha, rp.gamma) ==
          Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("tiny beta approaches the neutral target") {
  Rng rng = make_rng(15, "risk");
  for (int i = 0; i < 200; ++i) {
    const RandomTransition t = random_transition(rng);
    const double neutral =
        critic_target_neutral(t.reward, false, t.pi, t.logpi, t.q, 0.2, 0.99);
    const double ent =
        entropic_target<double>(t.reward, false, t.pi, t.q, {1e-8, 0.2, 0.99});
    CHECK(std::abs(ent - neutral) <= 1e-5);
  }
}

TEST_CASE("beta to zero continuity is linear in beta") {
  Rng rng = make_rng(16, "risk");
  for (int i = 0; i < 100; ++i) {
    const RandomTransition t = random_transition(rng);
    const double neutral =
        critic_target_neutral(t.reward, false, t.pi, t.logpi, t.q, 0.2, 0.99);
    const double range =
        *std::max_element(t.q.begin(), t.q.end()) - *std::min_element(t.q.begin(), t.q.end());
    const double c = 0.99 * 0.99 * range * range;  // bound on the variance term
    for (double beta : {1e-4, -1e-4, 1e-6, -1e-6}) {
      const double ent =
          entropic_target<double>(t.reward, false, t.pi, t.q, {beta, 0.2, 0.99});
      CHECK(std::abs(ent - neutral) <= c * std::abs(beta) + 1e-12);
    }
  }
}

TEST_CASE("stable target equals the naive formula on moderate values") {
  Rng rng = make_rng(17, "risk");
  for (int i = 0; i < 200; ++i) {
    const RandomTransition t = random_transition(rng);
    const RiskParams rp{next_bernoulli(rng, 0.5) ? -1.0 : 0.5, 0.2, 0.99};
    const double stable = entropic_target<double>(t.reward, false, t.pi, t.q, rp);
    const double naive = naive_entropic_target(t, rp);
    CHECK(stable == Catch::Approx(naive).margin(1e-9));
  }
}

TEST_CASE("done transitions truncate the target to the reward") {
  const std::vector<double> pi{0.2, 0.2, 0.2, 0.2, 0.2}, q{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(entropic_target<double>(-1.5, true, pi, q, {-1.0, 0.2, 0.99}) == -1.5);
}

TEST_CASE("entropic target is monotone in beta and bounded by the Q range") {
  Rng rng = make_rng(18, "risk");
  for (int i = 0; i < 100; ++i) {
    const RandomTransition t = random_transition(rng);
    const double h = policy_entropy<double>(t.pi);
    double prev = -std::numeric_limits<double>::infinity();
    for (double beta : {-5.0, -1.0, -0.1, 0.1, 1.0, 5.0}) {
      const RiskParams rp{beta, 0.2, 0.99};
      const double v = entropic_target<double>(t.reward, false, t.pi, t.q, rp);
      CHECK(v >= prev - 1e-12);
      prev = v;
      const double lo = t.reward + rp.gamma * rp.alpha * h +
                        rp.gamma * *std::min_element(t.q.begin(), t.q.end());
      const double hi = t.reward + rp.gamma * rp.alpha * h +
                        rp.gamma * *std::max_element(t.q.begin(), t.q.end());
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
  }
}

TEST_CASE("entropic target stays finite across extreme critic ranges") {
  Rng rng = make_rng(19, "risk");
  for (int i = 0; i < 100; ++i) {
    RandomTransition t = random_transition(rng, 1e3);
    for (double beta : {-10.0, -1.0, 1e-3, 10.0})
      CHECK(std::isfinite(
          entropic_target<double>(t.reward, false, t.pi, t.q, {beta, 0.2, 0.99})));
  }
}

TEST_CASE("critic_readout inverts the exponentiated values") {
  std::vector<double> ones{1.0, 1.0};
  const auto q0 = critic_readout<double>(ones, -2.0);
  CHECK(q0[0] == 0.0);
  CHECK(q0[1] == 0.0);

  const double beta = -0.7;
  std::vector<double> qbar{std::exp(beta * 3.0)};
  CHECK(critic_readout<double>(qbar, beta)[0] == Catch::Approx(3.0).margin(1e-12));

  Rng rng = make_rng(20, "risk");
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = next_uniform_in(rng, 0.05, 4.0);
    const auto q = critic_readout<double>(v, -2.0);
    for (size_t a = 0; a < v.size(); ++a)
      CHECK(q[a] == Catch::Approx(std::log(v[a]) / -2.0).margin(1e-12));
  }

  std::vector<double> bad{0.5, 0.0};
  CHECK_THROWS_AS(critic_readout<double>(bad, -1.0), std::domain_error);
  CHECK_THROWS_AS(critic_readout<double>(ones, 0.0), std::invalid_argument);
}

TEST_CASE("qbar target closed forms") {
  const std::vector<double> pi_uniform{0.2, 0.2, 0.2, 0.2, 0.2};
  const std::vector<double> qbar{1.0, 1.0, 1.0, 1.0, 1.0};
  // done: every term after e^{beta r} is one
  CHECK(qbar_target<double>(-1.0, true, pi_uniform, qbar, qbar, {-1.0, 0.2, 0.99}) ==
        Catch::Approx(std::exp(1.0)).margin(1e-12));

  // gamma = 1, alpha = 0, one-hot next policy: e^{beta r} * Qbar(s',a')
  const std::vector<double> onehot{0.0, 1.0, 0.0, 0.0, 0.0};
  std::vector<double> qb{0.3, 0.8, 1.1, 0.4, 2.0};
  const RiskParams rp{-0.5, 0.0, 1.0};
  CHECK(qbar_target<double>(0.7, false, onehot, qb, qb, rp) ==
        Catch::Approx(std::exp(-0.5 * 0.7) * 0.8).margin(1e-12));

  std::vector<double> with_zero{1.0, 0.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(qbar_target<double>(0.0, false, pi_uniform, with_zero, qbar, rp),
                  std::domain_error);
}

TEST_CASE("qbar and entropic targets agree through the readout at gamma one") {
  Rng rng = make_rng(21, "risk");
  for (int i = 0; i < 200; ++i) {
    const double beta = next_bernoulli(rng, 0.5) ? -1.2 : 0.8;
    const RiskParams rp{beta, 0.25, 1.0};
    RandomTransition t = random_transition(rng, 2.0);
    std::vector<double> qbar1(5), qbar2(5), qmin(5);
    for (int a = 0; a < 5; ++a) {
      qbar1[static_cast<size_t>(a)] = next_uniform_in(rng, 0.1, 3.0);
      qbar2[static_cast<size_t>(a)] = next_uniform_in(rng, 0.1, 3.0);
      qmin[static_cast<size_t>(a)] =
          std::min(std::log(qbar1[static_cast<size_t>(a)]) / beta,
                   std::log(qbar2[static_cast<size_t>(a)]) / beta);
    }
    const double via_qbar =
        std::log(qbar_target<double>(t.reward, false, t.pi, qbar1, qbar2, rp)) / beta;
    const double direct = entropic_target<double>(t.reward, false, t.pi, qmin, rp);
    CHECK(via_qbar == Catch::Approx(direct).margin(1e-8));
  }
}
