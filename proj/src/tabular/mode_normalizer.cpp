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

#include "twinforge/tabular/mode_normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twinforge/error.hpp"
#include "twinforge/rng.hpp"

namespace twinforge::tabular {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_density(const GaussianMode& m, double x) {
  const double z = (x - m.mean) / m.stdev;
  return -kLogSqrt2Pi - std::log(m.stdev) - 0.5 * z * z;
}

// log(sum(exp(v))) over the span, stable for large magnitudes.
double log_sum_exp(std::span<const double> v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

void check_values(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kTooFewValues, "need at least 2 values, got " +
                                              std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite value");
    }
  }
}

double mixture_log_likelihood(const std::vector<GaussianMode>& modes,
                              std::span<const double> values,
                              std::vector<double>& scratch) {
  scratch.resize(modes.size());
  double total = 0.0;
  for (double x : values) {
    for (std::size_t k = 0; k < modes.size(); ++k) {
      scratch[k] = std::log(modes[k].weight) + log_density(modes[k], x);
    }
    total += log_sum_exp(scratch);
  }
  return total;
}

// k-means++ seeding: first centre uniform, later ones proportional to the
// squared distance to the nearest chosen centre.
std::vector<double> seed_centres(std::span<const double> values,
                                 std::size_t k, Rng& rng) {
  std::vector<double> centres;
  centres.push_back(values[rng.below(values.size())]);
  std::vector<double> d2(values.size());
  while (centres.size() < k) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (double c : centres) {
        best = std::min(best, (values[i] - c) * (values[i] - c));
      }
      d2[i] = best;
    }
    centres.push_back(values[rng.categorical(d2)]);
  }
  return centres;
}

}  // namespace

std::vector<double> ModeNormalizer::responsibilities(double x) const {
  std::vector<double> logp(modes.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    logp[k] = std::log(modes[k].weight) + log_density(modes[k], x);
  }
  const double norm = log_sum_exp(logp);
  for (double& v : logp) v = std::exp(v - norm);
  return logp;
}

double ModeNormalizer::log_likelihood(std::span<const double> values) const {
  std::vector<double> scratch;
  return mixture_log_likelihood(modes, values, scratch);
}

double stdev_floor_for(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  return 1e-6 * (range > 0.0 ? range : 1.0);
}

MixtureFit fit_mixture(std::span<const double> values, std::size_t k,
                       std::uint64_t seed) {
  check_values(values);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const std::size_t n = values.size();
  const double floor = stdev_floor_for(values);
  Rng rng(mix_seed(seed, k));

  // Initial parameters from hard assignment to the seeded centres.
  const std::vector<double> centres = seed_centres(values, k, rng);
  double global_mean = 0.0;
  for (double v : values) global_mean += v;
  global_mean /= static_cast<double>(n);
  double global_var = 0.0;
  for (double v : values) global_var += (v - global_mean) * (v - global_mean);
  global_var /= static_cast<double>(n);

  std::vector<double> sum(k, 0.0), sum_sq(k, 0.0), count(k, 0.0);
  for (double v : values) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (std::abs(v - centres[j]) < std::abs(v - centres[best])) best = j;
    }
    count[best] += 1.0;
    sum[best] += v;
    sum_sq[best] += v * v;
  }
  std::vector<GaussianMode> modes(k);
  for (std::size_t j = 0; j < k; ++j) {
    // Coincident centres leave some clusters empty; give them a small share.
    const double c = std::max(count[j], 0.5);
    modes[j].weight = c;
    if (count[j] >= 2.0) {
      modes[j].mean = sum[j] / count[j];
      const double var =
          std::max(0.0, sum_sq[j] / count[j] - modes[j].mean * modes[j].mean);
      modes[j].stdev = std::max(std::sqrt(var), floor);
    } else {
      modes[j].mean = centres[j];
      modes[j].stdev = std::max(std::sqrt(global_var), floor);
    }
  }
  double total_weight = 0.0;
  for (const auto& m : modes) total_weight += m.weight;
  for (auto& m : modes) m.weight /= total_weight;

  MixtureFit fit;
  std::vector<double> scratch;
  double ll = mixture_log_likelihood(modes, values, scratch);
  fit.log_likelihood_trace.push_back(ll);

  std::vector<double> resp(n * k);
  for (int iter = 0; iter < kEmMaxIterations; ++iter) {
    // E step.
    for (std::size_t i = 0; i < n; ++i) {
      double* r = &resp[i * k];
      for (std::size_t j = 0; j < k; ++j) {
        r[j] = std::log(modes[j].weight) + log_density(modes[j], values[i]);
      }
      const double norm = log_sum_exp(std::span<const double>(r, k));
      for (std::size_t j = 0; j < k; ++j) r[j] = std::exp(r[j] - norm);
    }
    // M step. The variance is maximised subject to the floor, which keeps
    // this a generalised EM step: the likelihood cannot decrease.
    for (std::size_t j = 0; j < k; ++j) {
      double nk = 0.0, mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i * k + j];
        mean += resp[i * k + j] * values[i];
      }
      if (nk <= std::numeric_limits<double>::min()) {
        modes[j].weight = std::numeric_limits<double>::min();
        continue;
      }
      mean /= nk;
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - mean;
        var += resp[i * k + j] * d * d;
      }
      var /= nk;
      modes[j].weight = nk / static_cast<double>(n);
      modes[j].mean = mean;
      modes[j].stdev = std::max(std::sqrt(var), floor);
    }
    const double next = mixture_log_likelihood(modes, values, scratch);
    fit.log_likelihood_trace.push_back(next);
    fit.iterations = iter + 1;
    const double delta = next - ll;
    ll = next;
    if (std::abs(delta) < kEmTolerance) break;
  }

  // Components whose mass vanished carry no information; drop them.
  std::erase_if(modes, [](const GaussianMode& m) { return m.weight < 1e-12; });
  double w = 0.0;
  for (const auto& m : modes) w += m.weight;
  for (auto& m : modes) m.weight /= w;

  fit.normalizer.modes = std::move(modes);
  fit.normalizer.stdev_floor = floor;
  fit.log_likelihood = ll;
  const double params = 3.0 * static_cast<double>(k) - 1.0;
  fit.bic = -2.0 * ll + params * std::log(static_cast<double>(n));
  return fit;
}

ModeSelection select_mode_normalizer(std::span<const double> values,
                                     std::size_t max_modes,
                                     std::uint64_t seed) {
  check_values(values);
  if (max_modes == 0 || max_modes > kMaxModes) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_modes must be in [1, " + std::to_string(kMaxModes) + "]");
  }
  ModeSelection out;
  std::size_t best = 0;
  for (std::size_t k = 1; k <= max_modes; ++k) {
    out.candidates.push_back(fit_mixture(values, k, seed));
    // Strict comparison: ties keep the smaller model.
    if (out.candidates.back().bic < out.candidates[best].bic) best = k - 1;
  }
  out.normalizer = out.candidates[best].normalizer;
  return out;
}

ModeNormalizer fit_mode_normalizer(std::span<const double> values,
                                   std::size_t max_modes, std::uint64_t seed) {
  return select_mode_normalizer(values, max_modes, seed).normalizer;
}

}  // namespace twinforge::tabular
