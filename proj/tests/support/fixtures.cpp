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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "twinforge/ingest/top.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/text.hpp"

#ifndef TWINFORGE_FIXTURE_DIR
#error "TWINFORGE_FIXTURE_DIR must be defined"
#endif

namespace twinforge::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "twinforge-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::permissions(path_, fs::perms::owner_all, fs::perm_options::add, ec);
  fs::remove_all(path_, ec);
}

void write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

namespace {

double round_to(double v, double step) { return std::round(v / step) * step; }

double mixture(Rng& rng, double w, double m1, double s1, double m2, double s2) {
  return rng.uniform() < w ? rng.normal(m1, s1) : rng.normal(m2, s2);
}

// Shifts values so the mean lands on `target`, keeping the grid and floor.
void recentre(std::vector<double>& values, double target, double step) {
  for (int pass = 0; pass < 4; ++pass) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    const double shift = target - mean;
    if (std::abs(shift) < step / 4) return;
    for (double& v : values) v = std::max(0.0, round_to(v + shift, step));
  }
}

}  // namespace

ingest::TabularDataset process_fixture(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> users{"root", "alice", "daemon"};
  const std::vector<double> user_w{0.7, 0.2, 0.1};
  const std::vector<std::string> commands{"chrome", "bash", "python3", "sshd"};
  const std::vector<double> command_w{0.55, 0.25, 0.12, 0.08};

  std::vector<std::string> user(rows), command(rows);
  std::vector<double> cpu(rows), mem(rows), elapsed(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    user[i] = users[rng.categorical(user_w)];
    command[i] = commands[rng.categorical(command_w)];
    cpu[i] = std::max(0.0, round_to(mixture(rng, 0.75, 0.08, 0.03, 0.55, 0.10), 0.01));
    mem[i] = std::max(0.0, round_to(mixture(rng, 0.55, 0.60, 0.10, 1.45, 0.20), 0.01));
    elapsed[i] = std::max(0.0, round_to(mixture(rng, 0.65, 8.0, 2.0, 24.0, 3.0), 0.1));
  }
  recentre(cpu, 0.20, 0.01);
  recentre(mem, 0.99, 0.01);

  std::vector<ingest::ProcessSample> samples;
  for (std::size_t i = 0; i < rows; ++i) {
    samples.push_back({static_cast<long long>(1000 + i), user[i], cpu[i], mem[i],
                       elapsed[i], command[i]});
  }
  return ingest::to_dataset(samples);
}

fs::path fixture_dir() { return TWINFORGE_FIXTURE_DIR; }

std::vector<ingest::MacroScript> fixture_scripts() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fixture_dir() / "scripts")) {
    files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ingest::MacroScript> scripts;
  for (const auto& f : files) scripts.push_back(ingest::read_macro_script(f.string()));
  return scripts;
}

std::string sample_capture() {
  return text::read_file((fixture_dir() / "top_sample.txt").string());
}

void build_system_tree(const fs::path& root) {
  write(root / "apps/chrome.exe", "MZ chrome stub\n");
  write(root / "apps/notepad.exe", "MZ notepad stub\n");
  write(root / "apps/calc.exe", "MZ calc stub\n");
  write(root / "bin/cmd.exe", "MZ cmd stub\n");
  write(root / "etc/app.conf", "# service settings\nmode=safe\nport=8080\n");
  write(root / "etc/hosts", "127.0.0.1 localhost\n");
  write(root / "var/log/system.log", "boot ok\nservice started\n");
  write(root / "home/user/notes.txt", "remember the patch window\n");
  write(root / "usr/share/doc/readme.md", "# readme\n");
  write(root / "tmp/cache.bin", std::string("\x00\x01\x02\x03", 4));
  write(root / "tmp/session/lock", "1\n");
  fs::create_directories(root / "srv/empty");
  fs::permissions(root / "bin/cmd.exe", fs::perms::owner_exec | fs::perms::group_exec,
                  fs::perm_options::add);
}

}  // namespace twinforge::testing
