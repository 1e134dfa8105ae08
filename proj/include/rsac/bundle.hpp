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

#ifndef RSAC_BUNDLE_HPP
#define RSAC_BUNDLE_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsac/adam.hpp"
#include "rsac/net.hpp"
#include "rsac/seeding.hpp"

namespace rsac {

/// Actor, twin critics and their slowly tracking target copies, all sharing
/// one trunk. Targets start equal to their critics.
struct NetworkBundle {
  Network actor;
  Network critic1, critic2;
  Network target1, target2;
  AdamState actor_opt, critic1_opt, critic2_opt;
  std::int64_t train_step = 0;

  static NetworkBundle create(Trunk trunk, Head critic_head, double l2,
                              std::uint64_t seed, int dense_hidden = 64) {
    ArchitectureSpec actor_spec{trunk, Head::Softmax};
    actor_spec.l2_coefficient = l2;
    actor_spec.dense_hidden = dense_hidden;
    ArchitectureSpec critic_spec{trunk, critic_head};
    critic_spec.l2_coefficient = l2;
    critic_spec.dense_hidden = dense_hidden;
    NetworkBundle b;
    b.actor = Network(actor_spec);
    b.critic1 = Network(critic_spec);
    b.critic2 = Network(critic_spec);
    b.actor.init_params(derive_seed(seed, "init/actor"));
    b.critic1.init_params(derive_seed(seed, "init/critic1"));
    b.critic2.init_params(derive_seed(seed, "init/critic2"));
    b.target1 = b.critic1;
    b.target2 = b.critic2;
    b.actor_opt.reset(b.actor.n_params());
    b.critic1_opt.reset(b.critic1.n_params());
    b.critic2_opt.reset(b.critic2.n_params());
    return b;
  }

  /// theta_bar <- (1 - tau) * theta_bar + tau * theta
  void ema_update_targets(double tau) {
    target1.params() = (1.0 - tau) * target1.params() + tau * critic1.params();
    target2.params() = (1.0 - tau) * target2.params() + tau * critic2.params();
  }
};

// --- checkpointing ---

namespace detail {

inline nlohmann::json spec_to_json(const ArchitectureSpec& s) {
  return {{"trunk", s.trunk == Trunk::Conv ? "conv" : "dense"},
          {"head", s.head == Head::Softmax  ? "softmax"
                   : s.head == Head::Linear ? "linear"
                                            : "softplus"},
          {"in_channels", s.in_channels},
          {"in_h", s.in_h},
          {"in_w", s.in_w},
          {"n_actions", s.n_actions},
          {"dense_hidden", s.dense_hidden},
          {"l2_coefficient", s.l2_coefficient}};
}

inline ArchitectureSpec spec_from_json(const nlohmann::json& j) {
  ArchitectureSpec s;
  s.trunk = j.at("trunk") == "conv" ? Trunk::Conv : Trunk::Dense;
  const std::string head = j.at("head");
  s.head = head == "softmax" ? Head::Softmax : head == "linear" ? Head::Linear : Head::Softplus;
  s.in_channels = j.at("in_channels");
  s.in_h = j.at("in_h");
  s.in_w = j.at("in_w");
  s.n_actions = j.at("n_actions");
  s.dense_hidden = j.value("dense_hidden", 64);
  s.l2_coefficient = j.at("l2_coefficient");
  return s;
}

inline nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  std::vector<double> raw(v.data(), v.data() + v.size());
  return nlohmann::json(raw);
}

inline Eigen::VectorXd vec_from_json(const nlohmann::json& j) {
  std::vector<double> raw = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size()));
}

inline nlohmann::json adam_to_json(const AdamState& a) {
  return {{"m", vec_to_json(a.m)}, {"v", vec_to_json(a.v)}, {"t", a.t}};
}

inline AdamState adam_from_json(const nlohmann::json& j) {
  AdamState a;
  a.m = vec_from_json(j.at("m"));
  a.v = vec_from_json(j.at("v"));
  a.t = j.at("t");
  return a;
}

}  // namespace detail

/// Self-describing checkpoint container (MessagePack). Doubles are stored in
/// their binary encoding, so save/load round-trips bit-exactly. `metadata`
/// carries the run configuration and validation bookkeeping.
inline void save_checkpoint(const NetworkBundle& b, const std::string& path,
                            const nlohmann::json& metadata = {}) {
  nlohmann::json j;
  j["format"] = "rsac-checkpoint-v1";
  j["actor_spec"] = detail::spec_to_json(b.actor.spec());
  j["critic_spec"] = detail::spec_to_json(b.critic1.spec());
  j["params"] = {{"actor", detail::vec_to_json(b.actor.params())},
                 {"critic1", detail::vec_to_json(b.critic1.params())},
                 {"critic2", detail::vec_to_json(b.critic2.params())},
                 {"target1", detail::vec_to_json(b.target1.params())},
                 {"target2", detail::vec_to_json(b.target2.params())}};
  j["optimizer"] = {{"actor", detail::adam_to_json(b.actor_opt)},
                    {"critic1", detail::adam_to_json(b.critic1_opt)},
                    {"critic2", detail::adam_to_json(b.critic2_opt)}};
  j["train_step"] = b.train_step;
  j["metadata"] = metadata;
  std::vector<std::uint8_t> bytes = nlohmann::json::to_msgpack(j);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

struct LoadedCheckpoint {
  NetworkBundle bundle;
  nlohmann::json metadata;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  nlohmann::json j = nlohmann::json::from_msgpack(bytes);
  if (j.value("format", "") != "rsac-checkpoint-v1")
    throw std::runtime_error("not a rsac checkpoint: " + path);
  LoadedCheckpoint out;
  NetworkBundle& b = out.bundle;
  b.actor = Network(detail::spec_from_json(j.at("actor_spec")));
  b.critic1 = Network(detail::spec_from_json(j.at("critic_spec")));
  b.critic2 = b.critic1;
  b.target1 = b.critic1;
  b.target2 = b.critic1;
  b.actor.params() = detail::vec_from_json(j.at("params").at("actor"));
  b.critic1.params() = detail::vec_from_json(j.at("params").at("critic1"));
  b.critic2.params() = detail::vec_from_json(j.at("params").at("critic2"));
  b.target1.params() = detail::vec_from_json(j.at("params").at("target1"));
  b.target2.params() = detail::vec_from_json(j.at("params").at("target2"));
  b.actor_opt = detail::adam_from_json(j.at("optimizer").at("actor"));
  b.critic1_opt = detail::adam_from_json(j.at("optimizer").at("critic1"));
  b.critic2_opt = detail::adam_from_json(j.at("optimizer").at("critic2"));
  b.train_step = j.at("train_step");
  out.metadata = j.at("metadata");
  return out;
}

}  // namespace rsac

#endif  // RSAC_BUNDLE_HPP
