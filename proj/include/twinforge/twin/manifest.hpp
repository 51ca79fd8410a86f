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
#include <string_view>
#include <vector>

#include "json.hpp"

namespace twinforge::twin {

enum class EntryKind { kFile, kDir };

struct ManifestEntry {
  std::string path;  // relative, '/'-separated, no trailing slash
  std::uint64_t size = 0;
  std::string hash;  // SHA-256 hex of the content; empty for directories
  std::uint32_t mode = 0;  // permission bits
  EntryKind kind = EntryKind::kFile;

  bool operator==(const ManifestEntry&) const = default;
};

// Sorted by path.
using Manifest = std::vector<ManifestEntry>;

std::string sha256_hex(std::string_view data);

// Glob over '/'-separated paths: `*` and `?` stay within a segment, `**`
// crosses segments. A pattern ending in "/**" also matches the directory
// itself.
bool glob_match(std::string_view pattern, std::string_view path);
bool is_excluded(std::string_view path, const std::vector<std::string>& globs);

// Validates a relative path and returns its normal form. Throws InvalidPath
// for absolute paths, `..` segments, or empty paths.
std::string normalize_relative(std::string_view path);

const ManifestEntry* find_entry(const Manifest& manifest, std::string_view path);

// Walks `root`, skipping excluded paths and the names in `ignore_names` at
// the top level. Symlinks resolving outside root throw SymlinkOutsideRoot;
// links to files inside root are recorded as the file they point to, links
// to directories are recorded as empty directories.
Manifest scan_tree(const std::filesystem::path& root,
                   const std::vector<std::string>& exclusions,
                   const std::vector<std::string>& ignore_names = {});

nlohmann::json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& doc);

}  // namespace twinforge::twin
