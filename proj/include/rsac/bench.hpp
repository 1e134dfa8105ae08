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

#ifndef RSAC_BENCH_HPP
#define RSAC_BENCH_HPP

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsac/dataset.hpp"
#include "rsac/policy.hpp"
#include "rsac/trainer.hpp"

namespace rsac {

/// Mean undiscounted test return of one policy on one distribution.
struct EvalResult {
  std::string distribution_name;
  double mean_return = 0.0;
  std::string policy_id;
  std::uint64_t seed = 0;
};

inline EvalResult evaluate_policy(const PolicyFn& policy, const EpisodeDataset& ds,
                                  const GridConfig& cfg, const std::string& policy_id = "",
                                  std::uint64_t seed = 0) {
  return {ds.distribution_name, mean_return(cfg, ds, policy), policy_id, seed};
}

/// Training-data noise: each appearance record independently has its cell
/// resampled uniformly over the non-target cells with probability p.
/// Appearance times are untouched; p = 0 returns an identical dataset.
inline EpisodeDataset manipulate_dataset(const EpisodeDataset& ds, double p,
                                         std::uint64_t seed, const GridConfig& cfg) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("replacement probability not in [0,1]");
  std::vector<Cell> non_target;
  for (int i = 0; i < cfg.n_cells(); ++i)
    if (cfg.cell_at(i) != cfg.target) non_target.push_back(cfg.cell_at(i));
  Rng rng = make_rng(seed, "manipulate/" + ds.distribution_name + "/" + ds.split);
  EpisodeDataset out = ds;
  for (auto& schedule : out.episodes)
    for (auto& rec : schedule)
      if (next_bernoulli(rng, p)) {
        const Cell c = non_target[next_below(rng, non_target.size())];
        rec.row = c.row;
        rec.col = c.col;
      }
  return out;
}

/// (R_alg - R_greedy) / (R_upper - R_greedy): performance normalized between
/// the greedy baseline (0) and the policy trained on the true distribution (1).
inline std::optional<double> try_relative_gain(double r_alg, double r_greedy,
                                               double r_upper) {
  const double denom = r_upper - r_greedy;
  if (std::abs(denom) < 1e-9 * std::max({1.0, std::abs(r_upper), std::abs(r_greedy)}))
    return std::nullopt;
  return (r_alg - r_greedy) / denom;
}

inline double relative_gain(double r_alg, double r_greedy, double r_upper) {
  const auto g = try_relative_gain(r_alg, r_greedy, r_upper);
  if (!g) throw std::domain_error("relative_gain: degenerate denominator");
  return *g;
}

inline double gain_vs_greedy_pct(double r_alg, double r_greedy) {
  if (std::abs(r_greedy) < 1e-12) return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (r_alg - r_greedy) / std::abs(r_greedy);
}

/// Consistency-robustness score: w * perf_train + (1 - w) * perf_shift.
inline double tradeoff_score(double w, double perf_train, double perf_shift) {
  if (w < 0.0 || w > 1.0) throw std::invalid_argument("weight must be in [0,1]");
  return w * perf_train + (1.0 - w) * perf_shift;
}

// --- upper-bound table (policies trained on the "true" distribution) ---

struct UpperBoundTable {
  std::map<std::string, double> mean_returns;  // distribution -> test return
  std::string config_hash;

  nlohmann::json to_json() const {
    return {{"mean_returns", mean_returns}, {"config_hash", config_hash}};
  }
  static UpperBoundTable from_json(const nlohmann::json& j) {
    UpperBoundTable t;
    t.mean_returns = j.at("mean_returns").get<std::map<std::string, double>>();
    t.config_hash = j.at("config_hash").get<std::string>();
    return t;
  }
  /// Content hash recorded into every results table that references this one.
  std::string content_hash() const {
    std::ostringstream os;
    for (const auto& [k, v] : mean_returns) os << k << "=" << v << ";";
    os << config_hash;
    std::ostringstream hex;
    hex << std::hex << fnv1a64(os.str());
    return hex.str();
  }
};

// --- sweeps ---

enum class SweepAxis { Beta, AlphaFinal, ManipulationP, L2, BetaAlphaGrid };

inline const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Beta: return "beta";
    case SweepAxis::AlphaFinal: return "alpha_final";
    case SweepAxis::ManipulationP: return "manipulation_p";
    case SweepAxis::L2: return "l2_coefficient";
    case SweepAxis::BetaAlphaGrid: return "beta_alpha_grid";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::Beta;
  std::vector<double> values;                         // single-axis sweeps
  std::vector<std::pair<double, double>> grid_values; // (beta, alpha_final) pairs
  TrainerConfig base;
  std::vector<std::uint64_t> data_seeds = {101, 102, 103};  // manipulation repetitions
};

/// Everything a sweep evaluates against: the training-distribution splits,
/// all test splits, the greedy reference returns, and the shared upper-bound
/// table (one version for every relative metric).
struct BenchContext {
  GridConfig grid;
  std::string train_distribution = "gradient-1";
  EpisodeDataset train_ds;
  EpisodeDataset validation_ds;
  std::map<std::string, EpisodeDataset> test_splits;
  std::map<std::string, double> greedy_returns;
  std::optional<UpperBoundTable> upper;

  void compute_greedy_returns() {
    greedy_returns.clear();
    for (const auto& [name, ds] : test_splits)
      greedy_returns[name] = mean_return(grid, ds, greedy_policy(grid));
  }
};

struct SweepRow {
  std::string sweep_axis;
  std::string value;  // formatted axis value ("beta=-1" or "beta=-1,alpha=0.05")
  std::string distribution;
  double mean_return = 0.0;
  double gain_pct = 0.0;
  double rel_gain = std::numeric_limits<double>::quiet_NaN();
  std::string seed_set;
  std::string data_seed_set;
  std::string error;  // nonempty when the run failed
};

namespace detail {

inline std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string format_seed_set(const std::vector<std::uint64_t>& seeds) {
  std::ostringstream os;
  for (size_t i = 0; i < seeds.size(); ++i) os << (i ? "|" : "") << seeds[i];
  return os.str();
}

}  // namespace detail

/// Evaluates one trained policy on every test split and appends one row per
/// distribution, with gains referenced to greedy and the upper-bound table.
inline void append_eval_rows(std::vector<SweepRow>& rows, const BenchContext& ctx,
                             const Network& actor, const std::string& axis,
                             const std::string& value, const std::string& seed_set,
                             const std::string& data_seed_set) {
  for (const auto& [dist, ds] : ctx.test_splits) {
    SweepRow row;
    row.sweep_axis = axis;
    row.value = value;
    row.distribution = dist;
    row.mean_return = mean_return(ctx.grid, ds, actor_argmax_policy(actor, ctx.grid));
    const auto greedy_it = ctx.greedy_returns.find(dist);
    row.gain_pct = greedy_it == ctx.greedy_returns.end()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : gain_vs_greedy_pct(row.mean_return, greedy_it->second);
    if (ctx.upper && greedy_it != ctx.greedy_returns.end()) {
      const auto upper_it = ctx.upper->mean_returns.find(dist);
      if (upper_it != ctx.upper->mean_returns.end()) {
        const auto g =
            try_relative_gain(row.mean_return, greedy_it->second, upper_it->second);
        if (g) row.rel_gain = *g;
      }
    }
    row.seed_set = seed_set;
    row.data_seed_set = data_seed_set;
    rows.push_back(std::move(row));
  }
}

/// Runs the full protocol for every axis value: train (all seeds, best
/// validation selected), evaluate on all twelve test splits, emit
/// per-distribution rows. Individual failures are recorded and the sweep
/// continues.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const BenchContext& ctx) {
  std::vector<SweepRow> rows;
  const std::string axis = sweep_axis_name(spec.axis);

  auto run_one = [&](const TrainerConfig& cfg, const std::string& value,
                     const EpisodeDataset& train_ds, const std::string& data_seed_set) {
    MultiSeedResult r = train_multi_seed(ctx.grid, cfg, train_ds, ctx.validation_ds);
    const TrainResult& best = r.runs[r.best_index];
    append_eval_rows(rows, ctx, best.best_bundle.actor, axis, value,
                     detail::format_seed_set(cfg.seeds), data_seed_set);
  };

  auto guarded = [&](const std::string& value, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      SweepRow row;
      row.sweep_axis = axis;
      row.value = value;
      row.error = e.what();
      rows.push_back(std::move(row));
    }
  };

  switch (spec.axis) {
    case SweepAxis::Beta:
      for (double beta : spec.values)
        guarded("beta=" + detail::format_value(beta), [&] {
          TrainerConfig cfg = spec.base;
          cfg.beta = beta;
          run_one(cfg, "beta=" + detail::format_value(beta), ctx.train_ds, "");
        });
      break;
    case SweepAxis::AlphaFinal:
      for (double alpha : spec.values)
        guarded("alpha_final=" + detail::format_value(alpha), [&] {
          TrainerConfig cfg = spec.base;
          cfg.alpha_final = alpha;
          run_one(cfg, "alpha_final=" + detail::format_value(alpha), ctx.train_ds, "");
        });
      break;
    case SweepAxis::L2:
      for (double l2 : spec.values)
        guarded("l2=" + detail::format_value(l2), [&] {
          TrainerConfig cfg = spec.base;
          cfg.l2_coefficient = l2;
          run_one(cfg, "l2=" + detail::format_value(l2), ctx.train_ds, "");
        });
      break;
    case SweepAxis::ManipulationP:
      for (double p : spec.values)
        guarded("p=" + detail::format_value(p), [&] {
          // one policy per data seed; downstream reporting averages them
          for (std::uint64_t ds_seed : spec.data_seeds) {
            const EpisodeDataset manipulated =
                manipulate_dataset(ctx.train_ds, p, ds_seed, ctx.grid);
            run_one(spec.base, "p=" + detail::format_value(p), manipulated,
                    std::to_string(ds_seed));
          }
        });
      break;
    case SweepAxis::BetaAlphaGrid:
      for (const auto& [beta, alpha] : spec.grid_values) {
        const std::string value = "beta=" + detail::format_value(beta) +
                                  ",alpha=" + detail::format_value(alpha);
        guarded(value, [&] {
          TrainerConfig cfg = spec.base;
          cfg.beta = beta;
          cfg.alpha_final = alpha;
          run_one(cfg, value, ctx.train_ds, "");
        });
      }
      break;
  }
  return rows;
}

/// Mean over the manipulation repetitions: rows with equal (value,
/// distribution) collapse into one averaged row.
inline std::vector<SweepRow> average_data_seed_rows(const std::vector<SweepRow>& rows) {
  std::vector<SweepRow> out;
  std::map<std::pair<std::string, std::string>, std::vector<const SweepRow*>> groups;
  for (const auto& row : rows)
    if (row.error.empty()) groups[{row.value, row.distribution}].push_back(&row);
  for (const auto& [key, group] : groups) {
    SweepRow avg = *group.front();
    avg.mean_return = 0.0;
    avg.gain_pct = 0.0;
    avg.rel_gain = 0.0;
    std::ostringstream seeds;
    for (size_t i = 0; i < group.size(); ++i) {
      avg.mean_return += group[i]->mean_return;
      avg.gain_pct += group[i]->gain_pct;
      avg.rel_gain += group[i]->rel_gain;
      seeds << (i ? "|" : "") << group[i]->data_seed_set;
    }
    const double n = static_cast<double>(group.size());
    avg.mean_return /= n;
    avg.gain_pct /= n;
    avg.rel_gain /= n;
    avg.data_seed_set = seeds.str();
    out.push_back(std::move(avg));
  }
  return out;
}

/// Mean relative gain over the shifted distributions (the training
/// distribution itself excluded: 11 of 12).
inline double shift_average_relative_gain(const std::map<std::string, double>& rel_gains,
                                          const std::string& train_distribution) {
  double sum = 0.0;
  int count = 0;
  for (const auto& [dist, gain] : rel_gains) {
    if (dist == train_distribution || !std::isfinite(gain)) continue;
    sum += gain;
    ++count;
  }
  if (count == 0) throw std::domain_error("no shifted distributions with valid gains");
  return sum / count;
}

}  // namespace rsac

#endif  // RSAC_BENCH_HPP
