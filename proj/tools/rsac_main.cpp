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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "rsac/rsac.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::ostringstream os;
  os << std::hex << rsac::fnv1a64(bytes);
  return os.str();
}

rsac::RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return rsac::RunConfig{};
  return rsac::load_run_config(path);
}

std::string dataset_filename(const std::string& dist, const std::string& split) {
  return dist + "__" + split + ".msgpack";
}

rsac::EpisodeDataset load_split(const rsac::RunConfig& cfg, const std::string& dist,
                                const std::string& split) {
  const fs::path path = fs::path(cfg.data_dir) / dataset_filename(dist, split);
  if (!fs::exists(path))
    throw std::runtime_error("dataset not found: " + path.string() +
                             " (run `rsac gen-data` first)");
  return rsac::load_dataset(path.string());
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string provenance_comment(const rsac::RunConfig& cfg) {
  return "# provenance=" + rsac::provenance_json(cfg).dump();
}

// --- gen-data ---

int cmd_gen_data(const rsac::RunConfig& cfg, const std::vector<std::string>& only) {
  cfg.grid.validate();
  std::vector<std::string> names = only.empty() ? rsac::registered_distribution_names() : only;
  for (const auto& name : names) {
    const auto& known = rsac::registered_distribution_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      std::ostringstream os;
      os << "unknown distribution '" << name << "'; registered:";
      for (const auto& k : known) os << " " << k;
      throw std::invalid_argument(os.str());
    }
  }
  fs::create_directories(cfg.data_dir);

  const json registry = rsac::distribution_registry_json(cfg.grid, cfg.grid.items_per_step_rate);
  write_json(registry, (fs::path(cfg.data_dir) / "distributions.json").string());

  json manifest;
  manifest["provenance"] = rsac::provenance_json(cfg);
  manifest["files"] = json::object();
  const std::map<std::string, int> split_sizes = {{"train", cfg.splits.train},
                                                  {"validation", cfg.splits.validation},
                                                  {"test", cfg.splits.test}};
  for (const auto& name : names) {
    const auto dist = rsac::make_distribution(name, cfg.grid, cfg.grid.items_per_step_rate);
    for (const auto& [split, count] : split_sizes) {
      const auto seed = rsac::derive_seed(cfg.master_seed, "data/" + name + "/" + split);
      const auto ds = rsac::generate_dataset(dist, count, cfg.grid.horizon, seed, split);
      const std::string fname = dataset_filename(name, split);
      const std::string path = (fs::path(cfg.data_dir) / fname).string();
      rsac::save_dataset(ds, path);
      manifest["files"][fname] = {{"distribution", name},
                                  {"split", split},
                                  {"seed", seed},
                                  {"episodes", count},
                                  {"hash", file_hash_hex(path)}};
      std::cout << "wrote " << path << " (" << count << " episodes)\n";
    }
  }
  write_json(manifest, (fs::path(cfg.data_dir) / "manifest.json").string());
  std::cout << "manifest: " << (fs::path(cfg.data_dir) / "manifest.json").string() << "\n";
  return 0;
}

// --- train ---

int cmd_train(const rsac::RunConfig& cfg, bool quiet) {
  const auto train_ds = load_split(cfg, cfg.train_distribution, "train");
  const auto validation_ds = load_split(cfg, cfg.train_distribution, "validation");
  fs::create_directories(cfg.out_dir);

  double best_validation = -std::numeric_limits<double>::infinity();
  std::uint64_t best_seed = 0;
  std::int64_t best_step = 0;
  for (const std::uint64_t seed : cfg.trainer.seeds) {
    rsac::Trainer trainer(cfg.grid, cfg.trainer, train_ds, validation_ds);
    if (!quiet)
      trainer.progress = [seed](const rsac::MetricsRow& row) {
        std::cout << "seed " << seed << " step " << row.step << " validation "
                  << row.validation_return << "\n";
      };
    const rsac::TrainResult result = trainer.run(seed);

    const std::string metrics_path =
        (fs::path(cfg.out_dir) / ("metrics_seed" + std::to_string(seed) + ".csv")).string();
    {
      std::ofstream out(metrics_path);
      out << provenance_comment(cfg) << "\n" << rsac::metrics_csv_string(result.metrics);
    }
    const std::string ckpt_path =
        (fs::path(cfg.out_dir) / ("checkpoint_seed" + std::to_string(seed) + ".msgpack")).string();
    json meta = {{"provenance", rsac::provenance_json(cfg)},
                 {"seed", seed},
                 {"best_validation", result.best_validation},
                 {"best_step", result.best_step}};
    rsac::save_checkpoint(result.best_bundle, ckpt_path, meta);
    std::cout << "seed " << seed << ": best validation " << result.best_validation
              << " at step " << result.best_step << " -> " << ckpt_path << "\n";
    if (result.best_validation > best_validation) {
      best_validation = result.best_validation;
      best_seed = seed;
      best_step = result.best_step;
    }
  }
  write_json(json{{"provenance", rsac::provenance_json(cfg)},
                  {"best_seed", best_seed},
                  {"best_validation", best_validation},
                  {"best_step", best_step},
                  {"checkpoint", "checkpoint_seed" + std::to_string(best_seed) + ".msgpack"}},
             (fs::path(cfg.out_dir) / "best.json").string());
  return 0;
}

// --- evaluate ---

int cmd_evaluate(const rsac::RunConfig& cfg, const std::string& checkpoint,
                 const std::string& upper_bounds_path, bool use_greedy,
                 const std::string& out_csv) {
  std::optional<rsac::LoadedCheckpoint> loaded;
  if (!use_greedy) {
    if (checkpoint.empty()) throw std::invalid_argument("--checkpoint or --greedy required");
    loaded = rsac::load_checkpoint(checkpoint);
  }
  std::optional<rsac::UpperBoundTable> upper;
  if (!upper_bounds_path.empty()) {
    std::ifstream in(upper_bounds_path);
    if (!in) throw std::runtime_error("cannot open upper-bound table: " + upper_bounds_path);
    json j;
    in >> j;
    upper = rsac::UpperBoundTable::from_json(j);
  } else {
    std::cerr << "warning: no upper-bound table; reporting gains vs greedy only\n";
  }

  std::ofstream out(out_csv);
  if (!out) throw std::runtime_error("cannot write " + out_csv);
  out << provenance_comment(cfg) << "\n";
  if (upper) out << "# upper_bound_table_hash=" << upper->content_hash() << "\n";
  out << "distribution,policy,mean_return,greedy_return,gain_vs_greedy_pct,relative_gain\n";
  const std::string policy_id = use_greedy ? "greedy" : "checkpoint";
  for (const auto& name : rsac::registered_distribution_names()) {
    const auto test_ds = load_split(cfg, name, "test");
    const rsac::PolicyFn policy =
        use_greedy ? rsac::greedy_policy(cfg.grid)
                   : rsac::actor_argmax_policy(loaded->bundle.actor, cfg.grid);
    const auto eval = rsac::evaluate_policy(policy, test_ds, cfg.grid, policy_id);
    const double greedy_ret =
        rsac::mean_return(cfg.grid, test_ds, rsac::greedy_policy(cfg.grid));
    double rel = std::numeric_limits<double>::quiet_NaN();
    if (upper && upper->mean_returns.contains(name)) {
      const auto g =
          rsac::try_relative_gain(eval.mean_return, greedy_ret, upper->mean_returns.at(name));
      if (g) rel = *g;
    }
    out << name << ',' << policy_id << ',' << rsac::csv_number(eval.mean_return) << ','
        << rsac::csv_number(greedy_ret) << ','
        << rsac::csv_number(rsac::gain_vs_greedy_pct(eval.mean_return, greedy_ret)) << ','
        << rsac::csv_number(rel) << '\n';
    std::cout << name << ": " << eval.mean_return << "\n";
  }
  std::cout << "wrote " << out_csv << "\n";
  return 0;
}

// --- sweep ---

int cmd_sweep(const rsac::RunConfig& cfg, const std::string& upper_bounds_path) {
  rsac::BenchContext ctx;
  ctx.grid = cfg.grid;
  ctx.train_distribution = cfg.train_distribution;
  ctx.train_ds = load_split(cfg, cfg.train_distribution, "train");
  ctx.validation_ds = load_split(cfg, cfg.train_distribution, "validation");
  for (const auto& name : rsac::registered_distribution_names())
    ctx.test_splits[name] = load_split(cfg, name, "test");
  ctx.compute_greedy_returns();
  if (!upper_bounds_path.empty()) {
    std::ifstream in(upper_bounds_path);
    json j;
    in >> j;
    ctx.upper = rsac::UpperBoundTable::from_json(j);
  }

  rsac::SweepSpec spec;
  spec.axis = cfg.sweep_axis;
  spec.values = cfg.sweep_values;
  spec.grid_values = cfg.sweep_grid;
  spec.base = cfg.trainer;
  spec.data_seeds = cfg.data_seeds;

  const auto rows = rsac::run_sweep(spec, ctx);
  fs::create_directories(cfg.out_dir);
  const std::string path = (fs::path(cfg.out_dir) / "sweep_results.csv").string();
  rsac::write_sweep_csv(rows, path, ctx.upper ? ctx.upper->content_hash() : "");
  if (spec.axis == rsac::SweepAxis::ManipulationP) {
    const auto averaged = rsac::average_data_seed_rows(rows);
    rsac::write_sweep_csv(averaged,
                          (fs::path(cfg.out_dir) / "sweep_results_averaged.csv").string(),
                          ctx.upper ? ctx.upper->content_hash() : "");
  }
  std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
  return 0;
}

// --- verify ---

int cmd_verify(int n_mdps, double extra_beta, const std::string& out_path) {
  std::vector<rsac::verify::CheckResult> results;
  results.push_back(rsac::verify::check_logsumexp_identity(10000, 1001));
  results.push_back(rsac::verify::check_beta_zero_consistency(1000, 1002));
  results.push_back(rsac::verify::check_bellman_exactness(n_mdps, 1003));
  results.push_back(rsac::verify::check_gap_monotonicity(std::max(1, n_mdps / 4), 1004));
  results.push_back(rsac::verify::check_policy_improvement(n_mdps / 2, -0.01, 0.5, 1e-4, 1005));
  results.push_back(rsac::verify::check_policy_improvement(n_mdps / 2, 0.0, 0.5, 1e-10, 1006));
  if (extra_beta != 0.0 && std::abs(extra_beta) > 0.1)
    results.push_back(
        rsac::verify::check_policy_improvement(n_mdps / 2, extra_beta, 0.5, 1e-4, 1007, false));
  results.push_back(rsac::verify::check_taylor_expansion(100, 1008));
  results.push_back(rsac::verify::check_gradients(1009, rsac::Trunk::Dense, 100));

  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.details << "\n";
    all_pass = all_pass && r.pass;
  }
  json report = {{"code_version", rsac::code_version()},
                 {"checks", rsac::verify::to_json(results)},
                 {"all_pass", all_pass}};
  if (!out_path.empty()) write_json(report, out_path);
  return all_pass ? 0 : 1;
}

// --- report ---

struct ParsedSweepRow {
  std::string value, distribution;
  double mean_return, gain_pct, rel_gain;
};

std::vector<ParsedSweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<ParsedSweepRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 9 || !cells[8].empty()) continue;  // skip failed runs
    rows.push_back({cells[1], cells[2], std::stod(cells[3]), std::stod(cells[4]),
                    std::stod(cells[5])});
  }
  return rows;
}

int cmd_report(const std::string& results_csv, const std::string& train_distribution,
               const std::string& out_dir) {
  const auto rows = read_sweep_csv(results_csv);
  fs::create_directories(out_dir);

  // consistency (training distribution) vs robustness (shift average), per value
  std::map<std::string, std::map<std::string, double>> by_value;
  for (const auto& r : rows) by_value[r.value][r.distribution] = r.rel_gain;
  const std::string fig_consistency = (fs::path(out_dir) / "consistency_robustness.csv").string();
  {
    std::ofstream out(fig_consistency);
    out << "value,train_relative_gain,shift_avg_relative_gain\n";
    for (const auto& [value, gains] : by_value) {
      const auto train_it = gains.find(train_distribution);
      if (train_it == gains.end()) continue;
      out << value << ',' << rsac::csv_number(train_it->second) << ','
          << rsac::csv_number(rsac::shift_average_relative_gain(gains, train_distribution))
          << '\n';
    }
  }

  // tradeoff curve: weighted average as the weight sweeps 0..1
  const std::string fig_tradeoff = (fs::path(out_dir) / "tradeoff.csv").string();
  {
    std::ofstream out(fig_tradeoff);
    out << "weight";
    for (const auto& [value, _] : by_value) out << ',' << value;
    out << '\n';
    for (int w10 = 0; w10 <= 20; ++w10) {
      const double w = w10 / 20.0;
      out << rsac::csv_number(w);
      for (const auto& [value, gains] : by_value) {
        const auto train_it = gains.find(train_distribution);
        double score = std::numeric_limits<double>::quiet_NaN();
        if (train_it != gains.end())
          score = rsac::tradeoff_score(
              w, train_it->second,
              rsac::shift_average_relative_gain(gains, train_distribution));
        out << ',' << rsac::csv_number(score);
      }
      out << '\n';
    }
  }
  std::cout << "wrote " << fig_consistency << " and " << fig_tradeoff << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk-sensitive discrete soft actor-critic toolkit"};
  app.require_subcommand(1);

  std::string config_path, data_dir, out_dir, checkpoint, upper_bounds, out_csv, results_csv;
  std::vector<std::string> distributions;
  std::vector<std::uint64_t> seeds;
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::string variant;
  bool use_greedy = false, quiet = false;
  int n_mdps = 200;
  double verify_beta = 0.0;
  std::string report_json, train_distribution = "gradient-1";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration");
    cmd->add_option("--data", data_dir, "dataset directory (overrides config)");
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
  };

  CLI::App* gen = app.add_subcommand("gen-data", "generate datasets for all distributions");
  add_common(gen);
  gen->add_option("--distributions", distributions, "subset of distribution names");

  CLI::App* train = app.add_subcommand("train", "train a policy on the training distribution");
  add_common(train);
  train->add_option("--beta", beta, "risk parameter (overrides config)");
  train->add_option("--variant", variant, "target variant: auto|neutral|entropic|qbar");
  train->add_option("--seed", seeds, "training seeds (overrides config)");
  train->add_flag("--quiet", quiet, "suppress per-validation progress");

  CLI::App* eval = app.add_subcommand("evaluate", "evaluate a checkpoint on all test splits");
  add_common(eval);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file");
  eval->add_flag("--greedy", use_greedy, "evaluate the greedy baseline instead");
  eval->add_option("--upper-bounds", upper_bounds, "upper-bound table JSON");
  eval->add_option("--out-csv", out_csv, "results CSV path");

  CLI::App* sweep = app.add_subcommand("sweep", "run the configured sweep");
  add_common(sweep);
  sweep->add_option("--upper-bounds", upper_bounds, "upper-bound table JSON");

  CLI::App* verify = app.add_subcommand("verify", "run the tabular oracle suite");
  verify->add_option("--mdps", n_mdps, "random MDP count for the heavy checks");
  verify->add_option("--beta", verify_beta, "extra informational improvement check at this beta");
  verify->add_option("--out", report_json, "write the JSON report here");

  CLI::App* report = app.add_subcommand("report", "emit plot data from sweep results");
  report->add_option("--results", results_csv, "sweep results CSV")->required();
  report->add_option("--train-distribution", train_distribution, "training distribution name");
  report->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    rsac::RunConfig cfg = load_config_or_default(config_path);
    if (!data_dir.empty()) cfg.data_dir = data_dir;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!std::isnan(beta)) cfg.trainer.beta = beta;
    if (!variant.empty()) cfg.trainer.variant = rsac::detail::variant_from_string(variant);
    if (!seeds.empty()) cfg.trainer.seeds = seeds;
    cfg.trainer.validate();

    if (gen->parsed()) return cmd_gen_data(cfg, distributions);
    if (train->parsed()) return cmd_train(cfg, quiet);
    if (eval->parsed())
      return cmd_evaluate(cfg, checkpoint, upper_bounds, use_greedy,
                          out_csv.empty() ? "evaluation.csv" : out_csv);
    if (sweep->parsed()) return cmd_sweep(cfg, upper_bounds);
    if (verify->parsed()) return cmd_verify(n_mdps, verify_beta, report_json);
    if (report->parsed())
      return cmd_report(results_csv, train_distribution,
                        out_dir.empty() ? "report" : out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
