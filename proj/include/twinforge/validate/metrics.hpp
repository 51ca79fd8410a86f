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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twinforge/ingest/dataset.hpp"
#include "twinforge/ingest/macro.hpp"

namespace twinforge::validate {

struct ColumnSummary {
  std::string column;
  ingest::ColumnKind kind = ingest::ColumnKind::kContinuous;
  double mean = 0.0;           // continuous only
  std::string modal_category;  // discrete only
  std::size_t modal_count = 0;  // discrete only

  bool operator==(const ColumnSummary&) const = default;
};

struct SummaryStats {
  std::size_t rows = 0;
  std::vector<ColumnSummary> columns;  // schema order

  bool operator==(const SummaryStats&) const = default;
};

// Means of continuous columns; modal category of discrete columns, ties
// broken lexicographically. Throws EmptyDataset.
SummaryStats summary_stats(const ingest::TabularDataset& dataset);

inline constexpr double kRelativeEpsilon = 1e-9;

struct FieldDelta {
  std::string column;
  ingest::ColumnKind kind = ingest::ColumnKind::kContinuous;
  double real_mean = 0.0;
  double synth_mean = 0.0;
  double abs_delta = 0.0;
  double rel_delta = 0.0;  // abs_delta / max(|real|, eps)
  std::string real_modal;
  std::string synth_modal;
  bool modal_match = false;

  bool operator==(const FieldDelta&) const = default;
};

std::vector<FieldDelta> compare_stats(const SummaryStats& real,
                                      const SummaryStats& synth);

// Cosine of the two scripts' command-count vectors. Throws EmptyScript.
double cosine_similarity(const ingest::MacroScript& a,
                         const ingest::MacroScript& b);

// BLEU-4 with uniform weights, add-one smoothing for n = 2..4, and brevity
// penalty exp(1 - r/c) when the candidate is shorter than the closest
// reference length. Throws EmptyCandidate / NoReferences.
double bleu(std::span<const std::string> candidate,
            const std::vector<std::vector<std::string>>& references);

}  // namespace twinforge::validate
