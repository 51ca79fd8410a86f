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

#include <filesystem>
#include <string>
#include <vector>

#include "twinforge/twin/manifest.hpp"

namespace twinforge::twin {

inline const std::vector<std::string> kDefaultExclusions = {
    "tmp/**", "proc/**", "sys/**", "dev/**"};

// A captured filesystem tree: manifest plus a deterministic archive holding
// the file contents.
//
// Archive layout (little-endian):
//   "TWIMG\0" | u16 version=1 | u64 entry count
//   per entry, in manifest order:
//     u8 kind (0 file, 1 dir) | u32 mode | u32 path length | path bytes
//     | u64 content length | content bytes
// No timestamps or ownership are stored, so identical trees give identical
// bytes.
struct TwinImage {
  Manifest manifest;
  std::string archive;
  std::vector<std::string> exclusions;
  std::string captured_at;  // ISO-8601 UTC; sidecar metadata only
};

inline constexpr std::uint16_t kArchiveVersion = 1;

TwinImage capture_image(const std::filesystem::path& root,
                        const std::vector<std::string>& exclusions =
                            kDefaultExclusions);

struct ArchiveEntry {
  EntryKind kind = EntryKind::kFile;
  std::uint32_t mode = 0;
  std::string path;
  std::string content;
};

std::string encode_archive(const std::vector<ArchiveEntry>& entries);
// Throws MalformedArchive on any structural problem.
std::vector<ArchiveEntry> decode_archive(std::string_view bytes);

// Writes <dir>/<name>.twimg and <dir>/<name>.manifest.json.
void save_image(const TwinImage& image, const std::filesystem::path& dir,
                const std::string& name);
// Reads an image from its .twimg path and the adjacent sidecar.
TwinImage load_image(const std::filesystem::path& twimg_path);

// Convenience transport format: a gzip-compressed ustar archive with zeroed
// timestamps and ownership.
void export_tar_gz(const TwinImage& image, const std::filesystem::path& out);

}  // namespace twinforge::twin
