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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "twinforge/error.hpp"
#include "twinforge/ingest/dataset.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/tabular/gan.hpp"

namespace twinforge::tabular {

struct GateConfig {
  double tau_continuous = 0.1;  // EMD on values scaled by the real range
  double tau_discrete = 0.1;    // total variation
  int max_attempts = 20;

  void validate() const;
  bool operator==(const GateConfig&) const = default;
};

enum class DistanceKind { kEmd, kTotalVariation };

struct ColumnDistance {
  std::string column;
  DistanceKind kind = DistanceKind::kEmd;
  // Unset when the real column has zero range and the check is skipped.
  std::optional<double> distance;
  double threshold = 0.0;

  bool passes() const { return !distance || *distance <= threshold; }
  bool operator==(const ColumnDistance&) const = default;
};

// Per-column distances of `synth` against `real`. Continuous columns are
// min-max scaled by the real column's range before the EMD.
std::vector<ColumnDistance> gate_distances(const ingest::TabularDataset& real,
                                           const ingest::TabularDataset& synth,
                                           const GateConfig& gate);

bool gate_accepts(const std::vector<ColumnDistance>& distances);

struct GatedSample {
  ingest::TabularDataset dataset;
  int attempts = 0;
  std::vector<ColumnDistance> distances;
};

class GateExhausted : public Error {
 public:
  GateExhausted(int attempts, std::string column, double distance);

  int attempts() const { return attempts_; }
  const std::string& column() const { return column_; }
  double distance() const { return distance_; }

 private:
  int attempts_;
  std::string column_;
  double distance_;
};

// Samples n rows until every column distance is within its threshold, up to
// gate.max_attempts batches. Throws GateExhausted naming the worst column of
// the last attempt.
GatedSample generate_gated(const GanModel& model,
                           const ingest::TabularDataset& real, std::size_t n,
                           const GateConfig& gate, Rng& rng);

}  // namespace twinforge::tabular
