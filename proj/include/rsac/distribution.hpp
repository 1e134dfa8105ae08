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

#ifndef RSAC_DISTRIBUTION_HPP
#define RSAC_DISTRIBUTION_HPP

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsac/grid_config.hpp"
#include "rsac/seeding.hpp"

namespace rsac {

/// Per-cell, per-step item appearance probabilities. Entries sum to the
/// configured rate and are zero at the target cell.
struct ItemDistribution {
  std::string name;
  int height = 0;
  int width = 0;
  std::vector<double> probs;  // row-major, height*width

  double at(Cell c) const { return probs[static_cast<size_t>(c.row) * width + c.col]; }
  double sum() const {
    double s = 0;
    for (double p : probs) s += p;
    return s;
  }
};

/// The twelve registered configurations: four axis-aligned linear gradients,
/// four diagonal gradients, two corner-concentrated, one center-concentrated,
/// one uniform. Items are generated per cell by independent Bernoulli draws.
inline const std::vector<std::string>& registered_distribution_names() {
  static const std::vector<std::string> names = {
      "gradient-1", "gradient-2", "gradient-3", "gradient-4",
      "diagonal-1", "diagonal-2", "diagonal-3", "diagonal-4",
      "corner-1",   "corner-2",   "center",     "uniform"};
  return names;
}

struct DistributionParams {
  double slope = 1.0;         // linear gradients: weight 1 + slope * axis coordinate
  double length_scale = 1.5;  // corner/center: weight exp(-manhattan / length_scale)
};

namespace detail {

inline std::vector<double> distribution_weights(const std::string& kind,
                                                const GridConfig& cfg,
                                                const DistributionParams& par) {
  const int h = cfg.height, w = cfg.width;
  std::vector<double> weights(static_cast<size_t>(h) * w, 0.0);
  auto fill = [&](auto&& f) {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) weights[static_cast<size_t>(r) * w + c] = f(r, c);
  };
  auto decay = [&](Cell anchor) {
    return [anchor, &par](int r, int c) {
      const int d = std::abs(r - anchor.row) + std::abs(c - anchor.col);
      return std::exp(-d / par.length_scale);
    };
  };
  if (kind == "uniform") {
    fill([](int, int) { return 1.0; });
  } else if (kind == "gradient-1") {
    fill([&](int, int c) { return 1.0 + par.slope * c; });
  } else if (kind == "gradient-2") {
    fill([&](int, int c) { return 1.0 + par.slope * (w - 1 - c); });
  } else if (kind == "gradient-3") {
    fill([&](int r, int) { return 1.0 + par.slope * r; });
  } else if (kind == "gradient-4") {
    fill([&](int r, int) { return 1.0 + par.slope * (h - 1 - r); });
  } else if (kind == "diagonal-1") {
    fill([&](int r, int c) { return 1.0 + par.slope * (r + c); });
  } else if (kind == "diagonal-2") {
    fill([&](int r, int c) { return 1.0 + par.slope * (r + (w - 1 - c)); });
  } else if (kind == "diagonal-3") {
    fill([&](int r, int c) { return 1.0 + par.slope * ((h - 1 - r) + c); });
  } else if (kind == "diagonal-4") {
    fill([&](int r, int c) { return 1.0 + par.slope * ((h - 1 - r) + (w - 1 - c)); });
  } else if (kind == "corner-1") {
    fill(decay({0, 0}));
  } else if (kind == "corner-2") {
    fill(decay({h - 1, w - 1}));
  } else if (kind == "center") {
    fill(decay({h / 2, w / 2}));
  } else {
    throw std::invalid_argument("unknown distribution kind: " + kind);
  }
  return weights;
}

}  // namespace detail

/// Normalizes nonnegative weights into an ItemDistribution: the target cell is
/// zeroed and the remaining cells are scaled to sum to `rate`.
inline ItemDistribution normalize_distribution(const std::string& name,
                                               std::vector<double> weights,
                                               const GridConfig& cfg, double rate) {
  if (rate <= 0) throw std::invalid_argument("item rate must be > 0");
  if (weights.size() != static_cast<size_t>(cfg.n_cells()))
    throw std::invalid_argument("weight matrix does not match grid size");
  for (double v : weights)
    if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("negative weight entry");
  weights[cfg.cell_index(cfg.target)] = 0.0;
  double total = 0;
  for (double v : weights) total += v;
  if (total <= 0) throw std::invalid_argument("weights sum to zero off target");
  ItemDistribution dist{name, cfg.height, cfg.width, std::move(weights)};
  for (double& v : dist.probs) {
    v *= rate / total;
    if (v > 1.0)
      throw std::invalid_argument("rate too high: per-cell probability exceeds 1");
  }
  return dist;
}

inline ItemDistribution make_distribution(const std::string& kind, const GridConfig& cfg,
                                          double rate,
                                          const DistributionParams& par = {}) {
  return normalize_distribution(kind, detail::distribution_weights(kind, cfg, par), cfg,
                                rate);
}

/// Draws the cells where new items appear this step: one independent Bernoulli
/// trial per cell, visited in row-major order.
inline std::vector<Cell> spawn_items(const ItemDistribution& dist, Rng& rng) {
  std::vector<Cell> cells;
  for (int r = 0; r < dist.height; ++r)
    for (int c = 0; c < dist.width; ++c)
      if (next_bernoulli(rng, dist.probs[static_cast<size_t>(r) * dist.width + c]))
        cells.push_back({r, c});
  return cells;
}

// --- JSON registry (name -> row-major matrix) ---

inline nlohmann::json distribution_registry_json(const GridConfig& cfg, double rate) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& name : registered_distribution_names()) {
    ItemDistribution d = make_distribution(name, cfg, rate);
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < d.height; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < d.width; ++c) row.push_back(d.probs[static_cast<size_t>(r) * d.width + c]);
      rows.push_back(row);
    }
    j[name] = rows;
  }
  return j;
}

inline std::map<std::string, ItemDistribution> load_distribution_registry(
    const std::string& path, const GridConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution registry: " + path);
  nlohmann::json j;
  in >> j;
  std::map<std::string, ItemDistribution> out;
  for (auto& [name, rows] : j.items()) {
    ItemDistribution d;
    d.name = name;
    d.height = static_cast<int>(rows.size());
    d.width = d.height > 0 ? static_cast<int>(rows[0].size()) : 0;
    if (d.height != cfg.height || d.width != cfg.width)
      throw std::runtime_error("registry matrix shape mismatch for " + name);
    for (const auto& row : rows)
      for (const auto& v : row) d.probs.push_back(v.get<double>());
    out.emplace(name, std::move(d));
  }
  return out;
}

}  // namespace rsac

#endif  // RSAC_DISTRIBUTION_HPP
