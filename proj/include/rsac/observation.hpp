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

#ifndef RSAC_OBSERVATION_HPP
#define RSAC_OBSERVATION_HPP

#include <algorithm>
#include <vector>

#include "rsac/environment.hpp"
#include "rsac/grid_config.hpp"

namespace rsac {

/// Image-style state encoding, one channel per element type, stored
/// channel-major (channel, row, col). Channel 0 marks the target cell,
/// channel 1 the agent (1.0, or 0.5 while carrying), channel 2 holds per-cell
/// item countdowns normalized by the maximum response time (the largest
/// countdown when a cell holds several items).
struct Observation {
  static constexpr int kChannels = 3;
  int height = 0;
  int width = 0;
  std::vector<float> data;  // kChannels * height * width

  int size() const { return kChannels * height * width; }
  float& at(int ch, int row, int col) {
    return data[static_cast<size_t>((ch * height + row)) * width + col];
  }
  float at(int ch, int row, int col) const {
    return data[static_cast<size_t>((ch * height + row)) * width + col];
  }
};

inline Observation encode_state(const EnvState& s, const GridConfig& cfg) {
  Observation obs{cfg.height, cfg.width, {}};
  obs.data.assign(static_cast<size_t>(obs.size()), 0.0f);
  obs.at(0, cfg.target.row, cfg.target.col) = 1.0f;
  obs.at(1, s.agent.row, s.agent.col) = s.carrying ? 0.5f : 1.0f;
  for (const auto& item : s.items) {
    float v = static_cast<float>(item.remaining) / static_cast<float>(cfg.max_response_time);
    float& slot = obs.at(2, item.cell.row, item.cell.col);
    slot = std::max(slot, v);
  }
  return obs;
}

}  // namespace rsac

#endif  // RSAC_OBSERVATION_HPP
