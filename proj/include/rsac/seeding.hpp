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

#ifndef RSAC_SEEDING_HPP
#define RSAC_SEEDING_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace rsac {

// All randomness in the library is derived from one master seed through
// named streams: stream_seed = splitmix64(master ^ fnv1a64(label)).
// Distribution sampling uses the hand-rolled helpers below instead of
// std::*_distribution, whose output is implementation-defined.

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ull;
  }
  return h;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return splitmix64(master ^ fnv1a64(label));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::string_view label) {
  return Rng(derive_seed(master, label));
}

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
inline double next_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), n >= 1. Multiply-shift reduction.
inline std::uint64_t next_below(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

inline bool next_bernoulli(Rng& rng, double p) { return next_uniform(rng) < p; }

/// Uniform double in [lo, hi).
inline double next_uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * next_uniform(rng);
}

}  // namespace rsac

#endif  // RSAC_SEEDING_HPP
