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

#ifndef RSAC_TRAINER_HPP
#define RSAC_TRAINER_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsac/adam.hpp"
#include "rsac/bundle.hpp"
#include "rsac/dataset.hpp"
#include "rsac/observation.hpp"
#include "rsac/policy.hpp"
#include "rsac/replay.hpp"
#include "rsac/sac.hpp"
#include "rsac/seeding.hpp"

namespace rsac {

struct TrainerConfig {
  std::int64_t total_steps = 2000000;
  int update_every = 20;
  int validate_every = 5000;
  std::int64_t warmup_random_steps = 20000;
  double gamma = 0.99;
  int batch_size = 512;
  double huber_delta = 2.0;
  double grad_clip = 10.0;
  double learning_rate = 3e-4;
  double tau = 5e-3;
  double alpha_initial = 0.2;
  std::int64_t alpha_switch_step = 800000;
  double alpha_final = 0.0;
  double beta = 0.0;  // 0 selects the risk-neutral path under Auto
  TargetVariant variant = TargetVariant::Auto;
  Trunk trunk = Trunk::Conv;
  int dense_hidden = 64;
  double l2_coefficient = 1e-4;
  std::size_t replay_capacity = ReplayBuffer::kDefaultCapacity;
  std::vector<std::uint64_t> seeds = {1, 2, 3};

  void validate() const {
    if (total_steps < 0) throw std::invalid_argument("total_steps must be >= 0");
    if (update_every < 1 || validate_every < 1) throw std::invalid_argument("bad cadence");
    if (warmup_random_steps < 0) throw std::invalid_argument("bad warmup");
    if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in (0,1]");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (huber_delta <= 0.0 || grad_clip <= 0.0 || learning_rate <= 0.0 || tau <= 0.0)
      throw std::invalid_argument("huber_delta, grad_clip, lr, tau must be > 0");
    if (alpha_initial < 0.0 || alpha_final < 0.0)
      throw std::invalid_argument("alpha must be >= 0");
    if (seeds.empty()) throw std::invalid_argument("at least one seed required");
    if (resolve_variant(variant, beta) == TargetVariant::Qbar && beta == 0.0)
      throw std::invalid_argument("qbar variant requires beta != 0");
  }
};

/// Reduced configuration for minutes-scale runs: the small dense trunk and a
/// 10x shorter schedule, with the alpha switch scaled accordingly.
inline TrainerConfig desk_trainer_config() {
  TrainerConfig c;
  c.trunk = Trunk::Dense;
  c.total_steps = 200000;
  c.alpha_switch_step = 80000;
  c.update_every = 10;
  return c;
}

struct MetricsRow {
  std::int64_t step = 0;
  std::uint64_t seed = 0;
  double validation_return = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double wall_time_s = 0.0;
};

struct TrainResult {
  std::vector<MetricsRow> metrics;
  NetworkBundle best_bundle;  // highest validation return seen
  double best_validation = -std::numeric_limits<double>::infinity();
  std::int64_t best_step = 0;
  NetworkBundle final_bundle;
  std::uint64_t seed = 0;
};

/// Off-policy training loop: act with the current policy (uniform random
/// during warmup), store transitions, update critics and actor from sampled
/// batches every update_every steps, smooth the target critics, and select
/// the checkpoint with the best validation return.
class Trainer {
 public:
  Trainer(const GridConfig& grid, const TrainerConfig& cfg, const EpisodeDataset& train_ds,
          const EpisodeDataset& validation_ds)
      : grid_(grid), cfg_(cfg), train_ds_(&train_ds), validation_ds_(&validation_ds) {
    grid.validate();
    cfg.validate();
    if (train_ds.episodes.empty()) throw std::invalid_argument("empty training dataset");
  }

  std::function<void(const MetricsRow&)> progress;

  TrainResult run(std::uint64_t seed) {
    const auto t_start = std::chrono::steady_clock::now();
    const TargetVariant variant = resolve_variant(cfg_.variant, cfg_.beta);
    const Head critic_head =
        variant == TargetVariant::Qbar ? Head::Softplus : Head::Linear;

    TrainResult result;
    result.seed = seed;
    NetworkBundle bundle = NetworkBundle::create(cfg_.trunk, critic_head,
                                                 cfg_.l2_coefficient,
                                                 derive_seed(seed, "networks"),
                                                 cfg_.dense_hidden);
    const int obs_size = bundle.actor.spec().input_size();
    ReplayBuffer buffer(obs_size, cfg_.replay_capacity);
    AdamConfig adam{cfg_.learning_rate};

    Rng rng_episodes = make_rng(seed, "train/episodes");
    Rng rng_actions = make_rng(seed, "train/actions");
    Rng rng_batch = make_rng(seed, "train/batch");

    // epoch-shuffled cycling over the training schedules
    std::vector<size_t> order(train_ds_->episodes.size());
    std::iota(order.begin(), order.end(), size_t{0});
    size_t order_pos = 0;
    auto next_schedule = [&]() -> const EpisodeSchedule& {
      if (order_pos == order.size()) order_pos = 0;
      if (order_pos == 0)
        for (size_t i = order.size(); i > 1; --i)
          std::swap(order[i - 1], order[next_below(rng_episodes, i)]);
      return train_ds_->episodes[order[order_pos++]];
    };

    std::optional<Episode> episode;
    episode.emplace(grid_, next_schedule());
    Observation obs = encode_state(episode->state(), grid_);

    double last_actor_loss = 0.0;
    double last_critic_loss = 0.0;
    result.best_bundle = bundle;
    result.final_bundle = bundle;

    auto validate_now = [&](std::int64_t step, double alpha_now) {
      const double ret =
          mean_return(grid_, *validation_ds_, actor_argmax_policy(bundle.actor, grid_));
      if (ret > result.best_validation) {
        result.best_validation = ret;
        result.best_step = step;
        result.best_bundle = bundle;
      }
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      MetricsRow row{step,  seed,      ret,       last_actor_loss, last_critic_loss,
                     alpha_now, cfg_.beta, wall};
      result.metrics.push_back(row);
      if (progress) progress(row);
    };

    for (std::int64_t step = 1; step <= cfg_.total_steps; ++step) {
      const double alpha_now =
          step > cfg_.alpha_switch_step ? cfg_.alpha_final : cfg_.alpha_initial;

      // act
      Action action;
      if (step <= cfg_.warmup_random_steps) {
        action = static_cast<Action>(next_below(rng_actions, kNumActions));
      } else {
        const Eigen::VectorXd p =
            bundle.actor.forward(observation_column(obs)).col(0);
        const double u = next_uniform(rng_actions);
        double acc = 0.0;
        Eigen::Index chosen = p.size() - 1;
        for (Eigen::Index a = 0; a < p.size(); ++a) {
          acc += p[a];
          if (u < acc) {
            chosen = a;
            break;
          }
        }
        action = static_cast<Action>(chosen);
      }

      const StepEvents ev = episode->step(action);
      Observation next_obs = encode_state(episode->state(), grid_);
      buffer.push(obs.data, static_cast<int>(action), ev.reward, ev.done, next_obs.data);

      if (ev.done) {
        episode.emplace(grid_, next_schedule());
        obs = encode_state(episode->state(), grid_);
      } else {
        obs = std::move(next_obs);
      }

      if (step > cfg_.warmup_random_steps && step % cfg_.update_every == 0 &&
          buffer.size() >= static_cast<size_t>(cfg_.batch_size)) {
        update_round(bundle, buffer, rng_batch, adam, alpha_now, variant, last_actor_loss,
                     last_critic_loss);
      }

      if (step % cfg_.validate_every == 0) validate_now(step, alpha_now);
    }
    if (cfg_.total_steps % cfg_.validate_every != 0 && cfg_.total_steps > 0)
      validate_now(cfg_.total_steps,
                   cfg_.total_steps > cfg_.alpha_switch_step ? cfg_.alpha_final
                                                             : cfg_.alpha_initial);

    result.final_bundle = std::move(bundle);
    return result;
  }

 private:
  void update_round(NetworkBundle& bundle, const ReplayBuffer& buffer, Rng& rng_batch,
                    const AdamConfig& adam, double alpha_now, TargetVariant variant,
                    double& last_actor_loss, double& last_critic_loss) {
    const double sigma = buffer.reward_std();
    const double scale = sigma < 1e-8 ? 1.0 : 1.0 / sigma;
    const int obs_size = buffer.obs_size();

    const std::vector<size_t> idx = buffer.sample_indices(rng_batch, cfg_.batch_size);
    Batch batch;
    batch.s.resize(obs_size, cfg_.batch_size);
    batch.s_next.resize(obs_size, cfg_.batch_size);
    batch.a.resize(idx.size());
    batch.r.resize(static_cast<Eigen::Index>(idx.size()));
    batch.d.resize(idx.size());
    for (size_t b = 0; b < idx.size(); ++b) {
      const float* s = buffer.obs_at(idx[b]);
      const float* sn = buffer.next_obs_at(idx[b]);
      for (int f = 0; f < obs_size; ++f) {
        batch.s(f, static_cast<Eigen::Index>(b)) = s[f];
        batch.s_next(f, static_cast<Eigen::Index>(b)) = sn[f];
      }
      batch.a[b] = buffer.action_at(idx[b]);
      batch.r[static_cast<Eigen::Index>(b)] = buffer.reward_at(idx[b]) * scale;
      batch.d[b] = buffer.done_at(idx[b]);
    }

    const Eigen::VectorXd targets =
        compute_targets(batch, bundle, alpha_now, cfg_.gamma, variant, cfg_.beta);

    double closs = 0.0;
    for (Network* critic : {&bundle.critic1, &bundle.critic2}) {
      AdamState& opt = critic == &bundle.critic1 ? bundle.critic1_opt : bundle.critic2_opt;
      LossAndGrad lg = critic_loss(batch.s, batch.a, targets, *critic, cfg_.huber_delta);
      add_l2_gradient(*critic, lg.grad);
      clip_gradient(lg.grad, cfg_.grad_clip);
      adam_step(critic->params(), lg.grad, opt, adam);
      closs += 0.5 * lg.loss;
    }
    bundle.ema_update_targets(cfg_.tau);

    LossAndGrad pl = policy_loss(batch.s, bundle, alpha_now, variant, cfg_.beta);
    add_l2_gradient(bundle.actor, pl.grad);
    clip_gradient(pl.grad, cfg_.grad_clip);
    adam_step(bundle.actor.params(), pl.grad, bundle.actor_opt, adam);

    last_actor_loss = pl.loss;
    last_critic_loss = closs;
    ++bundle.train_step;
  }

  GridConfig grid_;
  TrainerConfig cfg_;
  const EpisodeDataset* train_ds_;
  const EpisodeDataset* validation_ds_;
};

/// Trains every seed in the config and returns the per-seed results plus the
/// index of the best validation performer (the model-selection protocol).
struct MultiSeedResult {
  std::vector<TrainResult> runs;
  size_t best_index = 0;
};

inline MultiSeedResult train_multi_seed(const GridConfig& grid, const TrainerConfig& cfg,
                                        const EpisodeDataset& train_ds,
                                        const EpisodeDataset& validation_ds) {
  MultiSeedResult out;
  for (std::uint64_t seed : cfg.seeds) {
    Trainer t(grid, cfg, train_ds, validation_ds);
    out.runs.push_back(t.run(seed));
    if (out.runs.back().best_validation > out.runs[out.best_index].best_validation)
      out.best_index = out.runs.size() - 1;
  }
  return out;
}

}  // namespace rsac

#endif  // RSAC_TRAINER_HPP
