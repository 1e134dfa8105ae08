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

#ifndef RSAC_RUN_CONFIG_HPP
#define RSAC_RUN_CONFIG_HPP

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsac/bench.hpp"
#include "rsac/dataset.hpp"
#include "rsac/grid_config.hpp"
#include "rsac/trainer.hpp"

#ifndef RSAC_CODE_VERSION
#define RSAC_CODE_VERSION "unknown"
#endif

namespace rsac {

inline const char* code_version() { return RSAC_CODE_VERSION; }

/// Full run configuration: schema-validated JSON, unknown keys rejected,
/// embedded verbatim into every output artifact.
struct RunConfig {
  GridConfig grid;
  TrainerConfig trainer;
  SplitSizes splits;
  std::string train_distribution = "gradient-1";
  std::uint64_t master_seed = 42;
  std::string data_dir = "datasets";
  std::string out_dir = "out";
  SweepAxis sweep_axis = SweepAxis::Beta;
  std::vector<double> sweep_values;
  std::vector<std::pair<double, double>> sweep_grid;
  std::vector<std::uint64_t> data_seeds = {101, 102, 103};
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key))
      throw std::invalid_argument("unknown config key '" + key + "' in " + where);
}

inline TargetVariant variant_from_string(const std::string& s) {
  if (s == "auto") return TargetVariant::Auto;
  if (s == "neutral") return TargetVariant::Neutral;
  if (s == "entropic") return TargetVariant::Entropic;
  if (s == "qbar") return TargetVariant::Qbar;
  throw std::invalid_argument("unknown variant: " + s);
}

inline SweepAxis axis_from_string(const std::string& s) {
  if (s == "beta") return SweepAxis::Beta;
  if (s == "alpha_final") return SweepAxis::AlphaFinal;
  if (s == "manipulation_p") return SweepAxis::ManipulationP;
  if (s == "l2_coefficient") return SweepAxis::L2;
  if (s == "beta_alpha_grid") return SweepAxis::BetaAlphaGrid;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

}  // namespace detail

inline nlohmann::json grid_to_json(const GridConfig& g) {
  return {{"width", g.width},
          {"height", g.height},
          {"horizon", g.horizon},
          {"max_response_time", g.max_response_time},
          {"move_cost", g.move_cost},
          {"delivery_revenue", g.delivery_revenue},
          {"target", {g.target.row, g.target.col}},
          {"items_per_step_rate", g.items_per_step_rate}};
}

inline GridConfig grid_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j,
                              {"width", "height", "horizon", "max_response_time", "move_cost",
                               "delivery_revenue", "target", "items_per_step_rate"},
                              "grid");
  GridConfig g;
  g.width = j.value("width", g.width);
  g.height = j.value("height", g.height);
  g.horizon = j.value("horizon", g.horizon);
  g.max_response_time = j.value("max_response_time", g.max_response_time);
  g.move_cost = j.value("move_cost", g.move_cost);
  g.delivery_revenue = j.value("delivery_revenue", g.delivery_revenue);
  if (j.contains("target")) g.target = {j["target"].at(0), j["target"].at(1)};
  g.items_per_step_rate = j.value("items_per_step_rate", g.items_per_step_rate);
  g.validate();
  return g;
}

inline nlohmann::json trainer_to_json(const TrainerConfig& t) {
  return {{"total_steps", t.total_steps},
          {"update_every", t.update_every},
          {"validate_every", t.validate_every},
          {"warmup_random_steps", t.warmup_random_steps},
          {"gamma", t.gamma},
          {"batch_size", t.batch_size},
          {"huber_delta", t.huber_delta},
          {"grad_clip", t.grad_clip},
          {"learning_rate", t.learning_rate},
          {"tau", t.tau},
          {"alpha_initial", t.alpha_initial},
          {"alpha_switch_step", t.alpha_switch_step},
          {"alpha_final", t.alpha_final},
          {"beta", t.beta},
          {"variant", variant_name(t.variant)},
          {"trunk", t.trunk == Trunk::Conv ? "conv" : "dense"},
          {"dense_hidden", t.dense_hidden},
          {"l2_coefficient", t.l2_coefficient},
          {"replay_capacity", t.replay_capacity},
          {"seeds", t.seeds}};
}

inline TrainerConfig trainer_from_json(const nlohmann::json& j, TrainerConfig t = {}) {
  detail::reject_unknown_keys(
      j, {"total_steps", "update_every", "validate_every", "warmup_random_steps", "gamma",
          "batch_size", "huber_delta", "grad_clip", "learning_rate", "tau", "alpha_initial",
          "alpha_switch_step", "alpha_final", "beta", "variant", "trunk", "dense_hidden",
          "l2_coefficient", "replay_capacity", "seeds"},
      "trainer");
  t.total_steps = j.value("total_steps", t.total_steps);
  t.update_every = j.value("update_every", t.update_every);
  t.validate_every = j.value("validate_every", t.validate_every);
  t.warmup_random_steps = j.value("warmup_random_steps", t.warmup_random_steps);
  t.gamma = j.value("gamma", t.gamma);
  t.batch_size = j.value("batch_size", t.batch_size);
  t.huber_delta = j.value("huber_delta", t.huber_delta);
  t.grad_clip = j.value("grad_clip", t.grad_clip);
  t.learning_rate = j.value("learning_rate", t.learning_rate);
  t.tau = j.value("tau", t.tau);
  t.alpha_initial = j.value("alpha_initial", t.alpha_initial);
  t.alpha_switch_step = j.value("alpha_switch_step", t.alpha_switch_step);
  t.alpha_final = j.value("alpha_final", t.alpha_final);
  t.beta = j.value("beta", t.beta);
  if (j.contains("variant")) t.variant = detail::variant_from_string(j["variant"]);
  if (j.contains("trunk")) t.trunk = j["trunk"] == "conv" ? Trunk::Conv : Trunk::Dense;
  t.dense_hidden = j.value("dense_hidden", t.dense_hidden);
  t.l2_coefficient = j.value("l2_coefficient", t.l2_coefficient);
  t.replay_capacity = j.value("replay_capacity", t.replay_capacity);
  if (j.contains("seeds")) t.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  t.validate();
  return t;
}

inline nlohmann::json run_config_to_json(const RunConfig& c) {
  nlohmann::json sweep = {{"axis", sweep_axis_name(c.sweep_axis)},
                          {"values", c.sweep_values},
                          {"data_seeds", c.data_seeds}};
  nlohmann::json grid_vals = nlohmann::json::array();
  for (const auto& [b, a] : c.sweep_grid) grid_vals.push_back({b, a});
  sweep["grid"] = grid_vals;
  return {{"grid", grid_to_json(c.grid)},
          {"trainer", trainer_to_json(c.trainer)},
          {"splits", {{"train", c.splits.train}, {"validation", c.splits.validation}, {"test", c.splits.test}}},
          {"train_distribution", c.train_distribution},
          {"master_seed", c.master_seed},
          {"paths", {{"data_dir", c.data_dir}, {"out_dir", c.out_dir}}},
          {"sweep", sweep}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j,
                              {"preset", "grid", "trainer", "splits", "train_distribution",
                               "master_seed", "paths", "sweep"},
                              "config root");
  RunConfig c;
  if (j.value("preset", "full") == "desk") c.trainer = desk_trainer_config();
  if (j.contains("grid")) c.grid = grid_from_json(j["grid"]);
  if (j.contains("trainer")) c.trainer = trainer_from_json(j["trainer"], c.trainer);
  if (j.contains("splits")) {
    detail::reject_unknown_keys(j["splits"], {"train", "validation", "test"}, "splits");
    c.splits.train = j["splits"].value("train", c.splits.train);
    c.splits.validation = j["splits"].value("validation", c.splits.validation);
    c.splits.test = j["splits"].value("test", c.splits.test);
  }
  c.train_distribution = j.value("train_distribution", c.train_distribution);
  c.master_seed = j.value("master_seed", c.master_seed);
  if (j.contains("paths")) {
    detail::reject_unknown_keys(j["paths"], {"data_dir", "out_dir"}, "paths");
    c.data_dir = j["paths"].value("data_dir", c.data_dir);
    c.out_dir = j["paths"].value("out_dir", c.out_dir);
  }
  if (j.contains("sweep")) {
    detail::reject_unknown_keys(j["sweep"], {"axis", "values", "grid", "data_seeds"}, "sweep");
    if (j["sweep"].contains("axis"))
      c.sweep_axis = detail::axis_from_string(j["sweep"]["axis"]);
    if (j["sweep"].contains("values"))
      c.sweep_values = j["sweep"]["values"].get<std::vector<double>>();
    if (j["sweep"].contains("grid"))
      for (const auto& pair : j["sweep"]["grid"])
        c.sweep_grid.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    if (j["sweep"].contains("data_seeds"))
      c.data_seeds = j["sweep"]["data_seeds"].get<std::vector<std::uint64_t>>();
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return run_config_from_json(j);
}

/// Provenance block embedded in every output file.
inline nlohmann::json provenance_json(const RunConfig& c) {
  return {{"config", run_config_to_json(c)}, {"code_version", code_version()}};
}

}  // namespace rsac

#endif  // RSAC_RUN_CONFIG_HPP
