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

#include <filesystem>
#include <fstream>
#include <set>

#include "rsac/run_config.hpp"

using namespace rsac;

TEST_CASE("seed derivation is deterministic and label sensitive") {
  CHECK(derive_seed(42, "a") == derive_seed(42, "a"));
  CHECK(derive_seed(42, "a") != derive_seed(42, "b"));
  CHECK(derive_seed(42, "a") != derive_seed(43, "a"));
}

TEST_CASE("rng helpers stay in range") {
  Rng rng = make_rng(1, "range");
  for (int i = 0; i < 10000; ++i) {
    const double u = next_uniform(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = next_below(rng, 7);
    CHECK(k < 7);
  }
}

TEST_CASE("run config round-trips through json") {
  RunConfig c;
  c.trainer = desk_trainer_config();
  c.trainer.beta = -1.0;
  c.master_seed = 7;
  c.sweep_values = {0.0, -0.5, -1.0};
  c.sweep_grid = {{-1.0, 0.05}};
  const nlohmann::json j = run_config_to_json(c);
  const RunConfig back = run_config_from_json(j);
  CHECK(run_config_to_json(back) == j);
}

TEST_CASE("unknown configuration keys are rejected") {
  nlohmann::json j = run_config_to_json(RunConfig{});
  j["surprise"] = 1;
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);

  j = run_config_to_json(RunConfig{});
  j["grid"]["widht"] = 5;  // typo must be caught
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);

  j = run_config_to_json(RunConfig{});
  j["trainer"]["learning_rte"] = 1e-3;
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);

  j = run_config_to_json(RunConfig{});
  j["sweep"]["axes"] = "beta";
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);
}

TEST_CASE("desk preset shrinks the schedule") {
  nlohmann::json j;
  j["preset"] = "desk";
  const RunConfig c = run_config_from_json(j);
  CHECK(c.trainer.trunk == Trunk::Dense);
  CHECK(c.trainer.total_steps == 200000);
  // explicit keys override the preset
  j["trainer"] = {{"total_steps", 1000}};
  CHECK(run_config_from_json(j).trainer.total_steps == 1000);
}

TEST_CASE("grid config validation catches bad values") {
  nlohmann::json j;
  j["grid"] = {{"horizon", 0}};
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);
  j["grid"] = {{"target", {9, 9}}};
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);
  j["grid"] = {{"move_cost", 1.0}};
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);
}

TEST_CASE("shipped distribution registry matches the parametric family") {
  // the registry file at data/distributions.json is generated from
  // make_distribution; regenerating must reproduce it entry by entry
  const GridConfig cfg;
  const nlohmann::json registry = distribution_registry_json(cfg, cfg.items_per_step_rate);
  REQUIRE(registry.size() == 12);
  for (const auto& name : registered_distribution_names()) {
    REQUIRE(registry.contains(name));
    const auto dist = make_distribution(name, cfg, cfg.items_per_step_rate);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c)
        CHECK(registry[name][r][c].get<double>() == dist.at({r, c}));
  }

  const auto dir = std::filesystem::temp_directory_path() / "rsac-config-test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "registry.json").string();
  {
    std::ofstream out(path);
    out << registry.dump(2);
  }
  const auto loaded = load_distribution_registry(path, cfg);
  CHECK(loaded.size() == 12);
  for (const auto& [name, dist] : loaded)
    CHECK(dist.sum() == Catch::Approx(cfg.items_per_step_rate).margin(1e-9));
  std::filesystem::remove_all(dir);
}

TEST_CASE("provenance embeds the config and code version") {
  const RunConfig c;
  const nlohmann::json p = provenance_json(c);
  CHECK(p.contains("config"));
  CHECK(p.contains("code_version"));
  CHECK_FALSE(p["code_version"].get<std::string>().empty());
}
