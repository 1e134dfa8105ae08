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

#include <algorithm>

#include "rsac/dataset.hpp"
#include "rsac/greedy.hpp"
#include "rsac/policy.hpp"

using namespace rsac;

TEST_CASE("manhattan distance") {
  CHECK(manhattan({0, 0}, {0, 0}) == 0);
  CHECK(manhattan({0, 0}, {4, 4}) == 8);
  CHECK(manhattan({1, 3}, {2, 0}) == 4);
}

TEST_CASE("item profit and reachability") {
  const GridConfig cfg;
  // agent 3 moves from the item, item 4 moves from the target
  const auto a = item_profit({0, 0}, Item{{0, 3}, 10}, {4, 3}, cfg);
  CHECK(a.profit == 8.0);
  CHECK(a.reachable);

  // standing on the item, one move to deliver
  const auto b = item_profit({2, 1}, Item{{2, 1}, 5}, {2, 2}, cfg);
  CHECK(b.profit == 14.0);
  CHECK(b.reachable);

  // five moves away but only four steps of life left
  const auto c = item_profit({0, 0}, Item{{1, 4}, 4}, {2, 2}, cfg);
  CHECK_FALSE(c.reachable);
}

TEST_CASE("carrying agent heads to the target on a shortest route") {
  const GridConfig cfg;
  EnvState s = initial_state(cfg);
  s.agent = {2, 0};
  s.carrying = true;
  CHECK(greedy_action(s, cfg) == Action::Right);
  // larger axis difference is reduced first, vertical wins ties
  s.agent = {0, 1};
  CHECK(greedy_action(s, cfg) == Action::Down);
  s.agent = {0, 0};
  CHECK(greedy_action(s, cfg) == Action::Down);
}

TEST_CASE("idle without profitable items") {
  const GridConfig cfg;
  EnvState s = initial_state(cfg);
  CHECK(greedy_action(s, cfg) == Action::Stay);
  // an unreachable item is ignored
  s.items = {{{4, 4}, 2}};
  s.agent = {0, 0};
  CHECK(greedy_action(s, cfg) == Action::Stay);
}

TEST_CASE("the most profitable item wins") {
  const GridConfig cfg;
  EnvState s = initial_state(cfg);
  s.agent = {2, 2};
  // right item: profit 15 - 2 - 2 = 11; corner item: profit 15 - 4 - 4 = 7
  s.items = {{{4, 0}, 9}, {{2, 4}, 9}};
  const auto d = greedy_decision(s, cfg);
  CHECK(d.intent == GreedyIntent::Fetch);
  CHECK(s.items[static_cast<size_t>(d.target_item)].cell == Cell{2, 4});
  CHECK(d.chosen_action == Action::Right);
}

TEST_CASE("profit ties break to the item closest to expiry then lexicographic") {
  const GridConfig cfg;
  EnvState s = initial_state(cfg);
  s.agent = {2, 2};
  s.items = {{{2, 0}, 9}, {{0, 2}, 4}};  // equal profit, second expires sooner
  auto d = greedy_decision(s, cfg);
  CHECK(s.items[static_cast<size_t>(d.target_item)].cell == Cell{0, 2});

  s.items = {{{2, 4}, 6}, {{0, 2}, 6}};  // full tie: (0,2) < (2,4)
  d = greedy_decision(s, cfg);
  CHECK(s.items[static_cast<size_t>(d.target_item)].cell == Cell{0, 2});
}

TEST_CASE("greedy is a pure function of the state") {
  const GridConfig cfg;
  Rng rng = make_rng(21, "greedy-determinism");
  for (int i = 0; i < 200; ++i) {
    EnvState s = initial_state(cfg);
    s.agent = {static_cast<int>(next_below(rng, 5)), static_cast<int>(next_below(rng, 5))};
    s.carrying = next_bernoulli(rng, 0.3);
    const int n = static_cast<int>(next_below(rng, 5));
    for (int k = 0; k < n; ++k)
      s.items.push_back({{static_cast<int>(next_below(rng, 5)), static_cast<int>(next_below(rng, 5))},
                         1 + static_cast<int>(next_below(rng, 10))});
    CHECK(greedy_action(s, cfg) == greedy_action(s, cfg));
    const auto d = greedy_decision(s, cfg);
    if (d.intent == GreedyIntent::Fetch) {
      const auto& item = s.items[static_cast<size_t>(d.target_item)];
      const auto pr = item_profit(s.agent, item, cfg.target, cfg);
      CHECK(pr.reachable);
      CHECK(pr.profit > 0.0);
    }
    if (s.carrying) CHECK(d.intent == GreedyIntent::Deliver);
  }
}

TEST_CASE("distance to target strictly decreases while carrying") {
  const GridConfig cfg;
  EnvState s = initial_state(cfg);
  s.agent = {0, 4};
  s.carrying = true;
  int dist = manhattan(s.agent, cfg.target);
  while (s.carrying) {
    const auto res = step(s, greedy_action(s, cfg), {}, cfg);
    s = res.state;
    if (s.carrying) {
      const int next = manhattan(s.agent, cfg.target);
      CHECK(next == dist - 1);
      dist = next;
    }
  }
  CHECK(s.agent == cfg.target);
}

TEST_CASE("greedy return is invariant to item order within a step") {
  const GridConfig cfg;
  const auto dist = make_distribution("diagonal-1", cfg, 1.0);
  const auto ds = generate_dataset(dist, 5, cfg.horizon, 31, "test");
  for (const auto& schedule : ds.episodes) {
    // reverse the record order within every time step
    EpisodeSchedule shuffled = schedule;
    size_t i = 0;
    while (i < shuffled.size()) {
      size_t j = i;
      while (j < shuffled.size() && shuffled[j].t == shuffled[i].t) ++j;
      std::reverse(shuffled.begin() + static_cast<long>(i), shuffled.begin() + static_cast<long>(j));
      i = j;
    }
    const double r1 = rollout_return(cfg, schedule, greedy_policy(cfg));
    const double r2 = rollout_return(cfg, shuffled, greedy_policy(cfg));
    CHECK(r1 == r2);
  }
}

TEST_CASE("greedy retargets when a better item appears") {
  const GridConfig cfg;
  EnvState s = initial_state(cfg);
  s.agent = {2, 2};
  s.items = {{{0, 4}, 9}};  // profit 15 - 4 - 4 = 7, chased upward first
  CHECK(greedy_action(s, cfg) == Action::Up);
  auto res = step(s, Action::Up, {}, cfg);
  s = res.state;
  CHECK(s.agent == Cell{1, 2});
  // a more profitable item appears below: 15 - 2 - 1 = 12 beats 15 - 3 - 4 = 8
  s.items.push_back({{2, 1}, 10});
  CHECK(greedy_action(s, cfg) == Action::Down);
}
