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

#ifndef RSAC_DATASET_HPP
#define RSAC_DATASET_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsac/distribution.hpp"
#include "rsac/environment.hpp"
#include "rsac/grid_config.hpp"
#include "rsac/seeding.hpp"

namespace rsac {

/// One pre-sampled item appearance: during the step taken at time t, an item
/// appears at (row, col) once that step's spawn phase runs.
struct AppearanceRecord {
  int t = 0;
  int row = 0;
  int col = 0;
  friend auto operator<=>(const AppearanceRecord&, const AppearanceRecord&) = default;
};

using EpisodeSchedule = std::vector<AppearanceRecord>;  // sorted by t

/// Replayable item appearance schedules for one (distribution, split) pair.
struct EpisodeDataset {
  std::string distribution_name;
  std::string split;  // train | validation | test
  std::uint64_t seed = 0;
  int horizon = 0;
  std::vector<EpisodeSchedule> episodes;
};

struct SplitSizes {
  int train = 800;
  int validation = 100;
  int test = 100;
};

inline EpisodeDataset generate_dataset(const ItemDistribution& dist, int n_episodes,
                                       int horizon, std::uint64_t seed,
                                       const std::string& split = "train") {
  if (n_episodes < 1) throw std::invalid_argument("n_episodes must be >= 1");
  EpisodeDataset ds{dist.name, split, seed, horizon, {}};
  ds.episodes.reserve(static_cast<size_t>(n_episodes));
  for (int e = 0; e < n_episodes; ++e) {
    Rng rng = make_rng(seed, dist.name + "/" + split + "/episode-" + std::to_string(e));
    EpisodeSchedule schedule;
    for (int t = 0; t < horizon; ++t)
      for (Cell c : spawn_items(dist, rng)) schedule.push_back({t, c.row, c.col});
    ds.episodes.push_back(std::move(schedule));
  }
  return ds;
}

// --- persistence (MessagePack container, bit-exact round-trip) ---

inline nlohmann::json dataset_to_json(const EpisodeDataset& ds) {
  nlohmann::json j;
  j["format"] = "rsac-dataset-v1";
  j["distribution"] = ds.distribution_name;
  j["split"] = ds.split;
  j["seed"] = ds.seed;
  j["horizon"] = ds.horizon;
  j["n_episodes"] = ds.episodes.size();
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& schedule : ds.episodes) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& rec : schedule) recs.push_back({rec.t, rec.row, rec.col});
    eps.push_back(std::move(recs));
  }
  j["episodes"] = std::move(eps);
  return j;
}

inline EpisodeDataset dataset_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "rsac-dataset-v1")
    throw std::runtime_error("not a rsac dataset file");
  EpisodeDataset ds;
  ds.distribution_name = j.at("distribution").get<std::string>();
  ds.split = j.at("split").get<std::string>();
  ds.seed = j.at("seed").get<std::uint64_t>();
  ds.horizon = j.at("horizon").get<int>();
  for (const auto& recs : j.at("episodes")) {
    EpisodeSchedule schedule;
    for (const auto& rec : recs)
      schedule.push_back({rec.at(0).get<int>(), rec.at(1).get<int>(), rec.at(2).get<int>()});
    ds.episodes.push_back(std::move(schedule));
  }
  if (ds.episodes.size() != j.at("n_episodes").get<size_t>())
    throw std::runtime_error("dataset episode count mismatch");
  return ds;
}

inline void save_dataset(const EpisodeDataset& ds, const std::string& path) {
  std::vector<std::uint8_t> bytes = nlohmann::json::to_msgpack(dataset_to_json(ds));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

inline EpisodeDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return dataset_from_json(nlohmann::json::from_msgpack(bytes));
}

struct StepEvents {
  double reward = 0.0;
  bool done = false;
  bool moved = false;
  bool delivered = false;
  bool picked_up = false;
};

/// Steps one episode against a fixed appearance schedule.
class Episode {
 public:
  Episode(const GridConfig& cfg, const EpisodeSchedule& schedule)
      : cfg_(&cfg), schedule_(&schedule) {
    reset();
  }

  void reset() {
    state_ = initial_state(*cfg_);
    cursor_ = 0;
    done_ = false;
  }

  const EnvState& state() const { return state_; }
  const GridConfig& config() const { return *cfg_; }
  bool done() const { return done_; }

  StepEvents step(Action a) {
    spawn_buffer_.clear();
    while (cursor_ < schedule_->size() && (*schedule_)[cursor_].t == state_.t) {
      const auto& rec = (*schedule_)[cursor_++];
      spawn_buffer_.push_back({rec.row, rec.col});
    }
    StepResult res = rsac::step(std::move(state_), a, spawn_buffer_, *cfg_);
    state_ = std::move(res.state);
    done_ = res.done;
    return {res.reward, res.done, res.moved, res.delivered, res.picked_up};
  }

 private:
  const GridConfig* cfg_;
  const EpisodeSchedule* schedule_;
  std::vector<Cell> spawn_buffer_;
  EnvState state_;
  size_t cursor_ = 0;
  bool done_ = false;
};

}  // namespace rsac

#endif  // RSAC_DATASET_HPP
