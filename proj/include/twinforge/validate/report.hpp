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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "twinforge/tabular/gate.hpp"
#include "twinforge/validate/metrics.hpp"
#include "twinforge/validate/replay.hpp"

namespace twinforge::validate {

inline constexpr int kReportFormatVersion = 1;

struct ScriptMetrics {
  std::string name;
  std::string prompt;
  double cosine = 0.0;
  double bleu = 0.0;
  bool replay_ok = false;
  std::optional<std::string> first_failure;  // e.g. "OutOfBounds@3"
  std::vector<ReplayEvent> events;           // simulated clock in at_ms

  bool operator==(const ScriptMetrics&) const = default;
};

struct ReportSeeds {
  std::uint64_t global = 0;
  std::uint64_t tabular = 0;
  std::uint64_t sequence = 0;

  bool operator==(const ReportSeeds&) const = default;
};

struct ComparisonReport {
  std::string run_id;
  nlohmann::json config;  // snapshot of the pipeline config
  ReportSeeds seeds;
  SummaryStats real_stats;
  SummaryStats synth_stats;
  std::vector<FieldDelta> deltas;
  std::vector<tabular::ColumnDistance> distances;
  int gate_attempts = 0;
  bool gate_verified = false;  // independent post-hoc recheck
  std::vector<ScriptMetrics> scripts;

  std::optional<double> mean_cosine() const;
  std::optional<double> mean_bleu() const;
  std::size_t replayed() const;

  bool operator==(const ComparisonReport&) const = default;
};

struct ReportInputs {
  nlohmann::json config;
  ReportSeeds seeds;
  const ingest::TabularDataset* real = nullptr;
  const ingest::TabularDataset* synth = nullptr;
  tabular::GateConfig gate;
  int gate_attempts = 0;
  std::vector<ScriptMetrics> scripts;
};

// Recomputes summaries, deltas and gate distances from the two datasets.
ComparisonReport build_report(const ReportInputs& inputs);

// First 16 hex digits of SHA-256 over the config snapshot and global seed.
std::string make_run_id(const nlohmann::json& config, std::uint64_t seed);

std::string serialize_report(const ComparisonReport& report);
ComparisonReport parse_report(std::string_view text);  // MalformedReport

std::filesystem::path report_path(const std::filesystem::path& reports_dir,
                                  const std::string& run_id);
void save_report(const ComparisonReport& report, const std::filesystem::path& path);
ComparisonReport load_report(const std::filesystem::path& path);

// Human-readable table of the comparison.
std::string render_report(const ComparisonReport& report);

}  // namespace twinforge::validate
