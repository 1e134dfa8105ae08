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

#ifndef RSAC_REPLAY_HPP
#define RSAC_REPLAY_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsac/seeding.hpp"

namespace rsac {

/// One replayable experience tuple in encoded-observation form.
struct Transition {
  std::vector<float> s;
  int a = 0;
  double r = 0.0;
  bool d = false;
  std::vector<float> s_next;
};

/// FIFO ring buffer of transitions with flat observation storage and running
/// first/second moments of the stored rewards (for reward normalization).
class ReplayBuffer {
 public:
  static constexpr size_t kDefaultCapacity = 200000;

  explicit ReplayBuffer(int obs_size, size_t capacity = kDefaultCapacity)
      : obs_size_(obs_size), capacity_(capacity) {
    if (obs_size < 1 || capacity < 1) throw std::invalid_argument("bad buffer shape");
    obs_.resize(capacity * static_cast<size_t>(obs_size) * 2);
    actions_.resize(capacity);
    rewards_.resize(capacity);
    dones_.resize(capacity);
  }

  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }
  int obs_size() const { return obs_size_; }

  void push(std::span<const float> s, int a, double r, bool d,
            std::span<const float> s_next) {
    if (s.size() != static_cast<size_t>(obs_size_) ||
        s_next.size() != static_cast<size_t>(obs_size_))
      throw std::invalid_argument("observation size mismatch");
    if (!std::isfinite(r)) throw std::invalid_argument("non-finite reward");
    if (size_ == capacity_) {  // FIFO eviction
      reward_sum_ -= rewards_[head_];
      reward_sumsq_ -= rewards_[head_] * rewards_[head_];
    } else {
      ++size_;
    }
    float* dst = obs_.data() + head_ * static_cast<size_t>(obs_size_) * 2;
    std::copy(s.begin(), s.end(), dst);
    std::copy(s_next.begin(), s_next.end(), dst + obs_size_);
    actions_[head_] = static_cast<std::uint8_t>(a);
    rewards_[head_] = r;
    dones_[head_] = d;
    reward_sum_ += r;
    reward_sumsq_ += r * r;
    head_ = (head_ + 1) % capacity_;
  }

  /// Population standard deviation of all rewards currently stored.
  double reward_std() const {
    if (size_ == 0) return 0.0;
    const double n = static_cast<double>(size_);
    const double mean = reward_sum_ / n;
    const double var = reward_sumsq_ / n - mean * mean;
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }

  const float* obs_at(size_t i) const {
    return obs_.data() + i * static_cast<size_t>(obs_size_) * 2;
  }
  const float* next_obs_at(size_t i) const { return obs_at(i) + obs_size_; }
  int action_at(size_t i) const { return actions_[i]; }
  double reward_at(size_t i) const { return rewards_[i]; }
  bool done_at(size_t i) const { return dones_[i]; }

  std::vector<size_t> sample_indices(Rng& rng, int batch) const {
    if (size_ == 0) throw std::logic_error("sampling from empty buffer");
    std::vector<size_t> idx(static_cast<size_t>(batch));
    for (auto& i : idx) i = next_below(rng, size_);
    return idx;
  }

 private:
  int obs_size_;
  size_t capacity_;
  size_t size_ = 0;
  size_t head_ = 0;  // next write slot; oldest element once full
  std::vector<float> obs_;
  std::vector<std::uint8_t> actions_;
  std::vector<double> rewards_;
  std::vector<bool> dones_;
  double reward_sum_ = 0.0;
  double reward_sumsq_ = 0.0;
};

}  // namespace rsac

#endif  // RSAC_REPLAY_HPP
