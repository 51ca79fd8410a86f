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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace twinforge::tabular {

struct GaussianMode {
  double weight = 1.0;
  double mean = 0.0;
  double stdev = 1.0;

  bool operator==(const GaussianMode&) const = default;
};

// One-dimensional Gaussian mixture describing the modes of a continuous
// column. Weights sum to one; every stdev is at least stdev_floor.
struct ModeNormalizer {
  std::vector<GaussianMode> modes;
  double stdev_floor = 1e-6;

  std::size_t size() const { return modes.size(); }
  // Posterior mode probabilities for x; sums to one.
  std::vector<double> responsibilities(double x) const;
  double log_likelihood(std::span<const double> values) const;

  bool operator==(const ModeNormalizer&) const = default;
};

inline constexpr std::size_t kMaxModes = 5;
inline constexpr int kEmMaxIterations = 50;
inline constexpr double kEmTolerance = 1e-6;

// Result of running EM with a fixed number of components.
struct MixtureFit {
  ModeNormalizer normalizer;
  double log_likelihood = 0.0;
  double bic = 0.0;
  int iterations = 0;
  // Log-likelihood of the initial parameters followed by one entry per
  // EM iteration.
  std::vector<double> log_likelihood_trace;
};

// 1e-6 times the value range, or 1e-6 if the range is zero.
double stdev_floor_for(std::span<const double> values);

// EM with k components from a k-means++ style seeded start.
MixtureFit fit_mixture(std::span<const double> values, std::size_t k,
                       std::uint64_t seed);

struct ModeSelection {
  ModeNormalizer normalizer;
  std::vector<MixtureFit> candidates;  // k = 1..max_modes
};

// Fits k = 1..max_modes and keeps the minimum-BIC mixture.
ModeSelection select_mode_normalizer(std::span<const double> values,
                                     std::size_t max_modes,
                                     std::uint64_t seed);

ModeNormalizer fit_mode_normalizer(std::span<const double> values,
                                   std::size_t max_modes = kMaxModes,
                                   std::uint64_t seed = 0);

}  // namespace twinforge::tabular
