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

// Writes the seeded test fixtures into a directory:
//   process.csv  system/  scripts/  top_sample.txt
#include <filesystem>
#include <iostream>

#include "fixtures.hpp"

#include "twinforge/ingest/dataset.hpp"
#include "twinforge/text.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <out-dir>\n";
    return 1;
  }
  const fs::path out = argv[1];
  fs::create_directories(out);
  twinforge::ingest::write_dataset_csv(twinforge::testing::process_fixture(),
                                       (out / "process.csv").string());
  twinforge::testing::build_system_tree(out / "system");
  fs::copy(twinforge::testing::fixture_dir() / "scripts", out / "scripts",
           fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  fs::copy_file(twinforge::testing::fixture_dir() / "top_sample.txt", out / "top_sample.txt",
                fs::copy_options::overwrite_existing);
  return 0;
}
