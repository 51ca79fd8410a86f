/*
 * Copyright 2026 The TwinForge Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace twinforge {

// Seeded random source with platform-independent derived distributions.
// std::mt19937_64's raw output is fixed by the standard; the standard
// distributions are not, so uniform/normal/categorical draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe to take the log of.
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double normal();
  double normal(double mean, double stdev) { return mean + stdev * normal(); }

  // Index drawn with probability proportional to weights[i]. Falls back to a
  // uniform draw when all weights are zero.
  std::size_t categorical(std::span<const double> weights);

  // Independent child stream; used to give each consumer its own sequence.
  Rng fork(std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used to derive seeds for sub-streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace twinforge
