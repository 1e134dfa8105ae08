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

#ifndef RSAC_GRID_CONFIG_HPP
#define RSAC_GRID_CONFIG_HPP

#include <compare>
#include <stdexcept>
#include <string>

namespace rsac {

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Discrete action space: stay plus the four cardinal moves.
enum class Action : int { Stay = 0, Up = 1, Right = 2, Down = 3, Left = 4 };

inline constexpr int kNumActions = 5;

inline const char* action_name(Action a) {
  switch (a) {
    case Action::Stay: return "stay";
    case Action::Up: return "up";
    case Action::Right: return "right";
    case Action::Down: return "down";
    case Action::Left: return "left";
  }
  return "?";
}

struct GridConfig {
  int width = 5;
  int height = 5;
  int horizon = 200;
  int max_response_time = 10;
  double move_cost = -1.0;
  double delivery_revenue = 15.0;
  Cell target{2, 2};
  double items_per_step_rate = 1.0;

  int n_cells() const { return width * height; }

  bool in_grid(Cell c) const {
    return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width;
  }

  int cell_index(Cell c) const { return c.row * width + c.col; }
  Cell cell_at(int index) const { return {index / width, index % width}; }

  void validate() const {
    if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (max_response_time < 1) throw std::invalid_argument("max_response_time must be >= 1");
    if (!in_grid(target)) throw std::invalid_argument("target_cell outside grid");
    if (move_cost > 0) throw std::invalid_argument("move_cost must be <= 0");
    if (delivery_revenue < 0) throw std::invalid_argument("delivery_revenue must be >= 0");
    if (items_per_step_rate < 0) throw std::invalid_argument("items_per_step_rate must be >= 0");
  }
};

/// One undelivered item on the grid. `remaining` counts the steps left until
/// it disappears, always in [1, max_response_time] while the item is live.
struct Item {
  Cell cell;
  int remaining = 0;
  friend auto operator<=>(const Item&, const Item&) = default;
};

}  // namespace rsac

#endif  // RSAC_GRID_CONFIG_HPP
