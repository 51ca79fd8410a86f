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

#include "twinforge/tabular/gate.hpp"

#include <algorithm>
#include <cmath>

#include "twinforge/tabular/distance.hpp"
#include "twinforge/text.hpp"

namespace twinforge::tabular {

using ingest::ColumnKind;

void GateConfig::validate() const {
  // Zero is allowed: it demands an exact match and is how exhaustion is
  // exercised.
  if (!(tau_continuous >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau_continuous must be >= 0");
  }
  if (!(tau_discrete >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau_discrete must be >= 0");
  }
  if (max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  }
}

GateExhausted::GateExhausted(int attempts, std::string column, double distance)
    : Error(ErrorCode::kGateExhausted,
            "no acceptable sample after " + std::to_string(attempts) +
                " attempts; worst column '" + column + "' at distance " +
                text::format_double(distance)),
      attempts_(attempts),
      column_(std::move(column)),
      distance_(distance) {}

std::vector<ColumnDistance> gate_distances(const ingest::TabularDataset& real,
                                           const ingest::TabularDataset& synth,
                                           const GateConfig& gate) {
  if (!(real.schema == synth.schema)) {
    throw Error(ErrorCode::kInvalidArgument, "schemas differ");
  }
  if (real.rows.empty() || synth.rows.empty()) {
    throw Error(ErrorCode::kEmptySample, "gate needs non-empty datasets");
  }
  std::vector<ColumnDistance> out;
  for (std::size_t c = 0; c < real.schema.size(); ++c) {
    ColumnDistance d;
    d.column = real.schema[c].name;
    if (real.schema[c].kind == ColumnKind::kContinuous) {
      d.kind = DistanceKind::kEmd;
      d.threshold = gate.tau_continuous;
      std::vector<double> a = real.continuous_column(c);
      std::vector<double> b = synth.continuous_column(c);
      const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
      const double low = *lo;
      const double range = *hi - low;
      if (range > 0.0) {
        for (double& v : a) v = (v - low) / range;
        for (double& v : b) v = (v - low) / range;
        d.distance = emd_1d(a, b);
      }
    } else {
      d.kind = DistanceKind::kTotalVariation;
      d.threshold = gate.tau_discrete;
      d.distance = tv_distance(real.discrete_column(c), synth.discrete_column(c));
    }
    out.push_back(std::move(d));
  }
  return out;
}

bool gate_accepts(const std::vector<ColumnDistance>& distances) {
  return std::all_of(distances.begin(), distances.end(),
                     [](const ColumnDistance& d) { return d.passes(); });
}

GatedSample generate_gated(const GanModel& model,
                           const ingest::TabularDataset& real, std::size_t n,
                           const GateConfig& gate, Rng& rng) {
  gate.validate();
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  real.validate();
  std::string worst_column;
  double worst_excess = -INFINITY;
  double worst_distance = 0.0;
  for (int attempt = 1; attempt <= gate.max_attempts; ++attempt) {
    GatedSample s;
    s.dataset = generate_rows(model, n, rng);
    s.distances = gate_distances(real, s.dataset, gate);
    if (gate_accepts(s.distances)) {
      s.attempts = attempt;
      return s;
    }
    if (attempt == gate.max_attempts) {
      for (const auto& d : s.distances) {
        if (!d.distance) continue;
        const double excess = *d.distance - d.threshold;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst_column = d.column;
          worst_distance = *d.distance;
        }
      }
    }
  }
  throw GateExhausted(gate.max_attempts, worst_column, worst_distance);
}

}  // namespace twinforge::tabular
