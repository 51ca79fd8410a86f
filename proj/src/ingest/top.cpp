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

#include "twinforge/ingest/top.hpp"

#include <cmath>
#include <cstdio>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::ingest {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

long long digits_value(std::string_view s) {
  long long v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

double parse_time_lapsed(std::string_view text) {
  // ^\d+:\d{2}\.\d$
  const auto colon = text.find(':');
  const auto dot = text.find('.');
  const auto fail = [&]() -> double {
    throw Error(ErrorCode::kMalformedTime,
                "expected MM:SS.t, got '" + std::string(text) + "'");
  };
  if (colon == std::string_view::npos || dot == std::string_view::npos ||
      dot < colon) {
    return fail();
  }
  const auto minutes = text.substr(0, colon);
  const auto seconds = text.substr(colon + 1, dot - colon - 1);
  const auto tenths = text.substr(dot + 1);
  if (!all_digits(minutes) || minutes.size() > 15 || seconds.size() != 2 ||
      !all_digits(seconds) || tenths.size() != 1 || !all_digits(tenths)) {
    return fail();
  }
  // Integer tenths first so 00:01.1 is exactly the double nearest 1.1.
  const long long total_tenths = digits_value(minutes) * 600 +
                                 digits_value(seconds) * 10 +
                                 digits_value(tenths);
  return static_cast<double>(total_tenths) / 10.0;
}

std::string format_time_lapsed(double seconds) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    throw Error(ErrorCode::kInvalidArgument, "elapsed time must be >= 0");
  }
  const long long total_tenths = std::llround(seconds * 10.0);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld.%lld", total_tenths / 600,
                (total_tenths / 10) % 60, total_tenths % 10);
  return buf;
}

Schema process_schema() {
  return Schema({{"user", ColumnKind::kDiscrete},
                 {"cpu_pct", ColumnKind::kContinuous},
                 {"mem_pct", ColumnKind::kContinuous},
                 {"elapsed_s", ColumnKind::kContinuous},
                 {"command", ColumnKind::kDiscrete}});
}

KindOverrides process_kind_overrides() {
  KindOverrides out;
  const Schema schema = process_schema();
  for (const auto& c : schema.columns()) out.emplace(c.name, c.kind);
  return out;
}

std::vector<ProcessSample> parse_top_samples(std::string_view text) {
  std::vector<ProcessSample> out;
  const auto lines = text::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = text::trim(lines[i]);
    if (line.empty() || line.starts_with("PID")) continue;
    const auto fields = text::split_whitespace(line);
    if (fields.size() < 6) {
      throw Error(ErrorCode::kMalformedLine, "expected at least 6 fields",
                  line_no);
    }
    ProcessSample s;
    const auto pid = text::parse_integer(fields[0]);
    const auto cpu = text::parse_finite(fields[2]);
    const auto mem = text::parse_finite(fields[3]);
    if (!pid || *pid <= 0 || !cpu || *cpu < 0.0 || !mem || *mem < 0.0 ||
        *mem > 100.0) {
      throw Error(ErrorCode::kMalformedLine, "bad numeric field", line_no);
    }
    s.pid = *pid;
    s.user = std::string(fields[1]);
    s.cpu_pct = *cpu;
    s.mem_pct = *mem;
    try {
      s.elapsed_s = parse_time_lapsed(fields[4]);
    } catch (const Error&) {
      throw Error(ErrorCode::kMalformedLine,
                  "bad time field '" + std::string(fields[4]) + "'", line_no);
    }
    // The command is the remainder of the line and may contain spaces.
    const std::size_t cmd_start =
        static_cast<std::size_t>(fields[5].data() - line.data());
    s.command = std::string(text::trim(line.substr(cmd_start)));
    out.push_back(std::move(s));
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyCapture, "no data lines");
  return out;
}

TabularDataset to_dataset(const std::vector<ProcessSample>& samples) {
  TabularDataset ds;
  ds.schema = process_schema();
  ds.rows.reserve(samples.size());
  for (const auto& s : samples) {
    ds.rows.push_back({s.user, s.cpu_pct, s.mem_pct, s.elapsed_s, s.command});
    ds.row_ids.push_back(s.pid);
  }
  ds.validate();
  return ds;
}

TabularDataset parse_top_capture(std::string_view text) {
  return to_dataset(parse_top_samples(text));
}

}  // namespace twinforge::ingest
