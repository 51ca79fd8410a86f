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

#include <string>
#include <string_view>
#include <vector>

#include "twinforge/ingest/dataset.hpp"

namespace twinforge::ingest {

// One line of a `top`-style process table.
struct ProcessSample {
  long long pid = 0;
  std::string user;
  double cpu_pct = 0.0;
  double mem_pct = 0.0;
  double elapsed_s = 0.0;
  std::string command;

  bool operator==(const ProcessSample&) const = default;
};

// "MM:SS.t" -> seconds. Throws MalformedTime on any other shape.
double parse_time_lapsed(std::string_view text);
// Inverse of parse_time_lapsed on the 0.1 s grid.
std::string format_time_lapsed(double seconds);

// Fixed modelling schema of a process capture:
// user, cpu_pct, mem_pct, elapsed_s, command. The pid becomes a row id.
Schema process_schema();
KindOverrides process_kind_overrides();

std::vector<ProcessSample> parse_top_samples(std::string_view text);
TabularDataset parse_top_capture(std::string_view text);
TabularDataset to_dataset(const std::vector<ProcessSample>& samples);

}  // namespace twinforge::ingest
