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
#include <string>
#include <vector>

#include "twinforge/ingest/dataset.hpp"
#include "twinforge/ingest/macro.hpp"

namespace twinforge::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

void write(const std::filesystem::path& path, const std::string& content);

// Seeded process table with a known mixture per column:
//   user     root 0.7 / alice 0.2 / daemon 0.1
//   command  chrome 0.55 / bash 0.25 / python3 0.12 / sshd 0.08
//   cpu_pct  0.75 N(0.08, 0.03) + 0.25 N(0.55, 0.10), clipped at 0
//   mem_pct  0.55 N(0.60, 0.10) + 0.45 N(1.45, 0.20)
//   elapsed  0.65 N(8, 2) + 0.35 N(24, 3), clipped at 0
// cpu and mem are shifted so their means round to 0.20 and 0.99.
ingest::TabularDataset process_fixture(std::size_t rows = 560,
                                       std::uint64_t seed = 2024);

// Directory holding the checked-in fixtures (scripts, capture text).
std::filesystem::path fixture_dir();
std::vector<ingest::MacroScript> fixture_scripts();
std::string sample_capture();

// A small system tree: apps/*.exe, bin/cmd.exe, etc/app.conf (mode=safe),
// logs, nested docs, and tmp/ content that capture must skip.
void build_system_tree(const std::filesystem::path& root);

}  // namespace twinforge::testing
