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

#include "twinforge/tabular/distance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "twinforge/error.hpp"

namespace twinforge::tabular {

double emd_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySample, "emd_1d needs two non-empty samples");
  }
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  // Sweep the merged support; between consecutive support points both
  // empirical CDFs are constant.
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double prev = std::min(xs.front(), ys.front());
  double total = 0.0;
  while (i < xs.size() || j < ys.size()) {
    double next;
    if (j == ys.size() || (i < xs.size() && xs[i] <= ys[j])) {
      next = xs[i];
    } else {
      next = ys[j];
    }
    const double fa = static_cast<double>(i) / na;
    const double fb = static_cast<double>(j) / nb;
    total += std::abs(fa - fb) * (next - prev);
    while (i < xs.size() && xs[i] == next) ++i;
    while (j < ys.size() && ys[j] == next) ++j;
    prev = next;
  }
  return total;
}

double tv_distance(std::span<const std::string> a,
                   std::span<const std::string> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySample, "tv_distance needs two non-empty samples");
  }
  std::map<std::string_view, std::pair<double, double>> freq;
  for (const auto& s : a) freq[s].first += 1.0;
  for (const auto& s : b) freq[s].second += 1.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double sum = 0.0;
  for (const auto& [cat, counts] : freq) {
    sum += std::abs(counts.first / na - counts.second / nb);
  }
  return 0.5 * sum;
}

}  // namespace twinforge::tabular
