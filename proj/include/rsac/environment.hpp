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

#ifndef RSAC_ENVIRONMENT_HPP
#define RSAC_ENVIRONMENT_HPP

#include <algorithm>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsac/grid_config.hpp"

namespace rsac {

/// Full simulator state. The agent carries at most one item (a boolean);
/// live items age by one step per transition and vanish at remaining == 0.
struct EnvState {
  Cell agent;
  bool carrying = false;
  std::vector<Item> items;
  int t = 0;
};

inline EnvState initial_state(const GridConfig& cfg) {
  return EnvState{cfg.target, false, {}, 0};
}

struct StepResult {
  EnvState state;
  double reward = 0.0;
  bool done = false;
  // event log, used by return-recomputation checks
  bool moved = false;
  bool delivered = false;
  bool picked_up = false;
};

inline Cell apply_move(Cell from, Action a) {
  switch (a) {
    case Action::Stay: return from;
    case Action::Up: return {from.row - 1, from.col};
    case Action::Right: return {from.row, from.col + 1};
    case Action::Down: return {from.row + 1, from.col};
    case Action::Left: return {from.row, from.col - 1};
  }
  return from;
}

/// One environment transition. Event order within a step:
/// move (clamped to the grid, attempted moves always cost move_cost) ->
/// deliver -> pick up (earliest expiry first, then lexicographic cell) ->
/// age items and drop expired ones -> add spawned items -> advance time.
inline StepResult step(EnvState state, Action action, std::span<const Cell> spawned,
                       const GridConfig& cfg) {
  if (state.t >= cfg.horizon) throw std::logic_error("step() called on a finished episode");
  StepResult out;
  // (1) movement
  if (action != Action::Stay) {
    Cell next = apply_move(state.agent, action);
    if (cfg.in_grid(next)) state.agent = next;
    out.reward += cfg.move_cost;
    out.moved = true;
  }
  // (2) delivery
  if (state.carrying && state.agent == cfg.target) {
    out.reward += cfg.delivery_revenue;
    state.carrying = false;
    out.delivered = true;
  }
  // (3) pickup: item closest to expiry, ties by (row, col)
  if (!state.carrying) {
    auto best = state.items.end();
    for (auto it = state.items.begin(); it != state.items.end(); ++it) {
      if (it->cell != state.agent) continue;
      if (best == state.items.end() || it->remaining < best->remaining ||
          (it->remaining == best->remaining && it->cell < best->cell))
        best = it;
    }
    if (best != state.items.end()) {
      state.items.erase(best);
      state.carrying = true;
      out.picked_up = true;
    }
  }
  // (4) aging
  for (auto& item : state.items) --item.remaining;
  std::erase_if(state.items, [](const Item& i) { return i.remaining <= 0; });
  // (5) spawns
  for (Cell c : spawned) {
    if (!cfg.in_grid(c)) throw std::invalid_argument("spawned cell outside grid");
    state.items.push_back({c, cfg.max_response_time});
  }
  // (6) time
  ++state.t;
  out.done = state.t == cfg.horizon;
  out.state = std::move(state);
  return out;
}

inline std::string dump_state(const EnvState& s, const GridConfig& cfg) {
  std::ostringstream os;
  os << "t=" << s.t << " agent=(" << s.agent.row << "," << s.agent.col << ")"
     << (s.carrying ? " carrying" : "") << "\n";
  for (int r = 0; r < cfg.height; ++r) {
    for (int c = 0; c < cfg.width; ++c) {
      Cell cell{r, c};
      char ch = '.';
      if (cell == cfg.target) ch = 'T';
      for (const auto& item : s.items)
        if (item.cell == cell) ch = static_cast<char>('0' + std::min(item.remaining, 9));
      if (cell == s.agent) ch = s.carrying ? 'C' : 'A';
      os << ch;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace rsac

#endif  // RSAC_ENVIRONMENT_HPP
