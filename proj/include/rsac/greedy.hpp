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

#ifndef RSAC_GREEDY_HPP
#define RSAC_GREEDY_HPP

#include <cmath>
#include <cstdlib>

#include "rsac/environment.hpp"
#include "rsac/grid_config.hpp"

namespace rsac {

inline int manhattan(Cell a, Cell b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

/// First move of a shortest route from `from` to `to`: reduce the axis with
/// the larger absolute difference first, vertical on ties.
inline Action route_step(Cell from, Cell to) {
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  if (dr == 0 && dc == 0) return Action::Stay;
  if (std::abs(dr) >= std::abs(dc) && dr != 0) return dr > 0 ? Action::Down : Action::Up;
  return dc > 0 ? Action::Right : Action::Left;
}

struct ItemProfit {
  double profit = 0.0;
  bool reachable = false;
};

/// Net value of fetching `item` and delivering it: revenue minus the move
/// costs agent->item->target. Reachable iff the item survives the approach.
inline ItemProfit item_profit(Cell agent, const Item& item, Cell target,
                              const GridConfig& cfg) {
  const int to_item = manhattan(agent, item.cell);
  const int to_target = manhattan(item.cell, target);
  return {cfg.delivery_revenue + cfg.move_cost * (to_item + to_target),
          to_item <= item.remaining};
}

enum class GreedyIntent { Deliver, Fetch, Idle };

struct GreedyDecision {
  Action chosen_action = Action::Stay;
  GreedyIntent intent = GreedyIntent::Idle;
  int target_item = -1;  // index into state.items when intent == Fetch
};

/// Myopic baseline. Carrying: shortest route to the target. Otherwise chase
/// the reachable item with the highest profit (> 0), re-evaluated every step;
/// ties go to the item closest to expiry, then to the smaller (row, col).
/// With no profitable reachable item the agent does not move.
inline GreedyDecision greedy_decision(const EnvState& s, const GridConfig& cfg) {
  if (s.carrying) return {route_step(s.agent, cfg.target), GreedyIntent::Deliver, -1};
  int best = -1;
  double best_profit = 0.0;
  for (int i = 0; i < static_cast<int>(s.items.size()); ++i) {
    const Item& item = s.items[static_cast<size_t>(i)];
    const auto [profit, reachable] = item_profit(s.agent, item, cfg.target, cfg);
    if (!reachable || profit <= 0.0) continue;
    if (best >= 0) {
      const Item& cur = s.items[static_cast<size_t>(best)];
      if (profit < best_profit) continue;
      if (profit == best_profit &&
          (item.remaining > cur.remaining ||
           (item.remaining == cur.remaining && !(item.cell < cur.cell))))
        continue;
    }
    best = i;
    best_profit = profit;
  }
  if (best < 0) return {Action::Stay, GreedyIntent::Idle, -1};
  return {route_step(s.agent, s.items[static_cast<size_t>(best)].cell), GreedyIntent::Fetch,
          best};
}

inline Action greedy_action(const EnvState& s, const GridConfig& cfg) {
  return greedy_decision(s, cfg).chosen_action;
}

}  // namespace rsac

#endif  // RSAC_GREEDY_HPP
