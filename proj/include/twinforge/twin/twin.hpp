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
#include <variant>
#include <vector>

#include "json.hpp"

#include "twinforge/twin/image.hpp"
#include "twinforge/twin/manifest.hpp"

namespace twinforge::twin {

inline constexpr std::string_view kLockFileName = ".twin.lock";

struct ScreenSize {
  int width = 1920;
  int height = 1080;

  bool operator==(const ScreenSize&) const = default;
};

// Windows opened by replayed Run commands, titled by the executable's base
// name.
struct WindowRegistry {
  std::vector<std::string> open;
  std::optional<std::string> active;

  bool operator==(const WindowRegistry&) const = default;
};

// A restored sandbox. The manifest always mirrors a fresh scan of `root`
// (lock file excluded).
struct TwinState {
  std::filesystem::path root;
  Manifest manifest;
  WindowRegistry windows;
  ScreenSize screen;
};

// Advisory exclusive lock on <sandbox>/.twin.lock, held for the lifetime of
// the object. Throws Locked if another writer holds it.
class TwinLock {
 public:
  explicit TwinLock(const std::filesystem::path& sandbox);
  ~TwinLock();
  TwinLock(const TwinLock&) = delete;
  TwinLock& operator=(const TwinLock&) = delete;

 private:
  int fd_ = -1;
};

Manifest scan_sandbox(const std::filesystem::path& sandbox);

// Restores every archive entry into an empty (or absent) sandbox, verifying
// content hashes against the image manifest before anything is written, then
// creates a fresh tmp/ directory.
TwinState instantiate_twin(const TwinImage& image,
                           const std::filesystem::path& sandbox,
                           ScreenSize screen = {});

// Re-opens an existing sandbox.
TwinState open_twin(const std::filesystem::path& sandbox, ScreenSize screen = {});

// Declarative patch operations.
struct AddFile {
  std::string path;
  std::string content;
};
struct ReplaceFile {
  std::string path;
  std::string content;
};
struct DeleteFile {
  std::string path;
};
// Rewrites the `key=value` line of a line-oriented config file.
struct SetConfig {
  std::string file;
  std::string key;
  std::string value;
};
using PatchOp = std::variant<AddFile, ReplaceFile, DeleteFile, SetConfig>;

struct PatchDelta {
  std::vector<PatchOp> ops;
};

PatchDelta patch_from_json(const nlohmann::json& doc);
nlohmann::json patch_to_json(const PatchDelta& delta);

struct PatchReport {
  std::size_t applied = 0;
  Manifest manifest;
};

// Applies ops in order to a shadow copy and swaps it in only if all succeed;
// on any failure the sandbox is untouched. Errors: DeleteMissing,
// ReplaceMissing, AddExisting, ConfigKeyMissing, InvalidPath (position = op
// index).
PatchReport apply_patch(TwinState& twin, const PatchDelta& delta);

// Post-patch assertions.
struct FileExists {
  std::string path;
};
struct HashEquals {
  std::string path;
  std::string hash;
};
struct ConfigEquals {
  std::string file;
  std::string key;
  std::string value;
};
using Check = std::variant<FileExists, HashEquals, ConfigEquals>;

struct CheckSpec {
  std::vector<Check> checks;
};

CheckSpec checks_from_json(const nlohmann::json& doc);

struct CheckResult {
  std::string description;
  bool passed = false;
  std::string detail;  // expected vs actual on failure
};

std::vector<CheckResult> run_checks(const TwinState& twin, const CheckSpec& spec);

// Value of `key` in a `key=value` config text, if present.
std::optional<std::string> config_value(std::string_view text,
                                        std::string_view key);

struct ModifiedEntry {
  std::string path;
  std::string old_hash;
  std::string new_hash;
  std::uint32_t old_mode = 0;
  std::uint32_t new_mode = 0;

  bool operator==(const ModifiedEntry&) const = default;
};

struct TwinDiff {
  std::vector<std::string> added;
  std::vector<std::string> removed;
  std::vector<ModifiedEntry> modified;

  bool empty() const { return added.empty() && removed.empty() && modified.empty(); }
  bool operator==(const TwinDiff&) const = default;
};

TwinDiff diff_states(const Manifest& pre, const Manifest& post);
nlohmann::json diff_to_json(const TwinDiff& diff);

}  // namespace twinforge::twin
