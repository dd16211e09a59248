// Copyright 2026 The qmlverify Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace qmv {

/// SplitMix64 finalizer. Used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for stream `id` under `seed`:
///   mix_seed(seed, id) = splitmix64(seed ^ splitmix64(id + 0x9E3779B97F4A7C15)).
/// Depends only on (seed, id), never on how many draws the parent made, so
/// Monte-Carlo trials can be scheduled in any order and replay identically.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id) noexcept;

/// Seedable, splittable deterministic generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard leaves their algorithms unspecified, and
/// experiment outputs must be byte-identical across toolchains.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent stream derived from this stream's seed (not its state).
  RandomStream child(std::uint64_t id) const { return RandomStream(mix_seed(seed_, id)); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one variate per call, no caching).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qmv
