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

#include "twinforge/twin/twin.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <map>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::twin {

namespace fs = std::filesystem;

TwinLock::TwinLock(const fs::path& sandbox) {
  const fs::path lock = sandbox / kLockFileName;
  fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(ErrorCode::kIo, "cannot open " + lock.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::kLocked, "twin is locked by another writer: " +
                                        sandbox.string());
  }
}

TwinLock::~TwinLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

Manifest scan_sandbox(const fs::path& sandbox) {
  return scan_tree(sandbox, {}, {std::string(kLockFileName)});
}

namespace {

void set_mode(const fs::path& p, std::uint32_t mode) {
  fs::permissions(p, static_cast<fs::perms>(mode & 07777),
                  fs::perm_options::replace);
}

void write_content(const fs::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + p.string());
}

}  // namespace

TwinState instantiate_twin(const TwinImage& image, const fs::path& sandbox,
                           ScreenSize screen) {
  std::error_code ec;
  if (fs::exists(sandbox, ec)) {
    if (!fs::is_directory(sandbox) || !fs::is_empty(sandbox)) {
      throw Error(ErrorCode::kSandboxNotEmpty, sandbox.string());
    }
  }

  // Verify before touching the filesystem.
  const std::vector<ArchiveEntry> entries = decode_archive(image.archive);
  if (entries.size() != image.manifest.size()) {
    throw Error(ErrorCode::kMalformedArchive,
                "archive has " + std::to_string(entries.size()) +
                    " entries, manifest has " +
                    std::to_string(image.manifest.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ArchiveEntry& a = entries[i];
    const ManifestEntry& m = image.manifest[i];
    const bool same_shape =
        a.path == m.path && a.kind == m.kind && a.mode == m.mode;
    const bool same_content =
        a.kind == EntryKind::kDir ||
        (a.content.size() == m.size && sha256_hex(a.content) == m.hash);
    if (!same_shape || !same_content) {
      throw Error(ErrorCode::kHashMismatch, m.path);
    }
    if (normalize_relative(a.path) != a.path) {
      throw Error(ErrorCode::kInvalidPath, a.path);
    }
  }

  fs::create_directories(sandbox);
  TwinLock lock(sandbox);
  for (const auto& e : entries) {
    const fs::path target = sandbox / e.path;
    if (e.kind == EntryKind::kDir) {
      fs::create_directories(target);
    } else {
      fs::create_directories(target.parent_path());
      write_content(target, e.content);
      set_mode(target, e.mode);
    }
  }
  // Directory modes last, deepest first, so read-only directories still get
  // their children.
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->kind == EntryKind::kDir) set_mode(sandbox / it->path, it->mode);
  }
  const fs::path tmp = sandbox / "tmp";
  if (!fs::exists(tmp)) {
    fs::create_directory(tmp);
    set_mode(tmp, 0777);
  }

  TwinState state;
  state.root = sandbox;
  state.screen = screen;
  state.manifest = scan_sandbox(sandbox);
  return state;
}

TwinState open_twin(const fs::path& sandbox, ScreenSize screen) {
  TwinState state;
  state.root = sandbox;
  state.screen = screen;
  state.manifest = scan_sandbox(sandbox);
  return state;
}

// ---------------------------------------------------------------------------
// Patches

namespace {

std::optional<std::size_t> find_config_line(const std::vector<std::string>& lines,
                                            std::string_view key) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    if (text::trim(line.substr(0, eq)) == key) return i;
  }
  return std::nullopt;
}

void copy_tree(const fs::path& from, const fs::path& to, bool top) {
  fs::create_directory(to);
  for (const auto& entry : fs::directory_iterator(from)) {
    const std::string name = entry.path().filename().string();
    if (top && name == kLockFileName) continue;
    const fs::path dest = to / name;
    if (entry.is_symlink()) {
      fs::copy_symlink(entry.path(), dest);
    } else if (entry.is_directory()) {
      copy_tree(entry.path(), dest, false);
    } else if (entry.is_regular_file()) {
      fs::copy_file(entry.path(), dest);
    }
  }
  fs::permissions(to, fs::status(from).permissions(), fs::perm_options::replace);
}

void apply_op(const fs::path& root, const PatchOp& op, std::size_t index) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, SetConfig>) {
          const std::string rel = normalize_relative(o.file);
          const fs::path p = root / rel;
          if (!fs::is_regular_file(p)) {
            throw Error(ErrorCode::kConfigKeyMissing,
                        "config file " + rel + " does not exist", index);
          }
          const std::string body = text::read_file(p.string());
          std::vector<std::string> lines = text::split_lines(body);
          const auto at = find_config_line(lines, o.key);
          if (!at) {
            throw Error(ErrorCode::kConfigKeyMissing,
                        "key '" + o.key + "' not in " + rel, index);
          }
          lines[*at] = o.key + "=" + o.value;
          std::string out;
          for (std::size_t i = 0; i < lines.size(); ++i) {
            out += lines[i];
            if (i + 1 < lines.size() || body.ends_with('\n')) out.push_back('\n');
          }
          write_content(p, out);
        } else {
          const std::string rel = normalize_relative(o.path);
          if (rel == kLockFileName) {
            throw Error(ErrorCode::kInvalidPath, "reserved path " + rel, index);
          }
          const fs::path p = root / rel;
          std::error_code ec;
          const bool is_file = fs::is_regular_file(fs::symlink_status(p, ec));
          if constexpr (std::is_same_v<T, AddFile>) {
            if (fs::exists(fs::symlink_status(p, ec))) {
              throw Error(ErrorCode::kAddExisting, rel, index);
            }
            fs::create_directories(p.parent_path());
            write_content(p, o.content);
            set_mode(p, 0644);
          } else if constexpr (std::is_same_v<T, ReplaceFile>) {
            if (!is_file) throw Error(ErrorCode::kReplaceMissing, rel, index);
            write_content(p, o.content);
          } else {
            if (!is_file) throw Error(ErrorCode::kDeleteMissing, rel, index);
            fs::remove(p);
          }
        }
      },
      op);
}

}  // namespace

PatchReport apply_patch(TwinState& twin, const PatchDelta& delta) {
  TwinLock lock(twin.root);
  PatchReport report;
  if (delta.ops.empty()) {
    twin.manifest = scan_sandbox(twin.root);
    report.manifest = twin.manifest;
    return report;
  }

  const fs::path root = fs::absolute(twin.root).lexically_normal();
  const fs::path base = root.has_filename() ? root : root.parent_path();
  const fs::path shadow =
      base.parent_path() / ("." + base.filename().string() + ".shadow");
  fs::remove_all(shadow);
  copy_tree(base, shadow, /*top=*/true);
  try {
    for (std::size_t i = 0; i < delta.ops.size(); ++i) {
      apply_op(shadow, delta.ops[i], i);
      ++report.applied;
    }
  } catch (...) {
    std::error_code ec;
    fs::remove_all(shadow, ec);
    throw;
  }

  // Commit: swap the shadow's contents in, keeping the lock file.
  for (const auto& entry : fs::directory_iterator(base)) {
    if (entry.path().filename() == kLockFileName) continue;
    fs::remove_all(entry.path());
  }
  for (const auto& entry : fs::directory_iterator(shadow)) {
    fs::rename(entry.path(), base / entry.path().filename());
  }
  fs::remove_all(shadow);

  twin.manifest = scan_sandbox(twin.root);
  report.manifest = twin.manifest;
  return report;
}

PatchDelta patch_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "patch must be a JSON list of ops");
  }
  PatchDelta delta;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    try {
      const std::string op = j.at("op").get<std::string>();
      if (op == "add_file") {
        delta.ops.emplace_back(AddFile{normalize_relative(j.at("path").get<std::string>()),
                                       j.at("content").get<std::string>()});
      } else if (op == "replace_file") {
        delta.ops.emplace_back(ReplaceFile{normalize_relative(j.at("path").get<std::string>()),
                                           j.at("content").get<std::string>()});
      } else if (op == "delete_file") {
        delta.ops.emplace_back(DeleteFile{normalize_relative(j.at("path").get<std::string>())});
      } else if (op == "set_config") {
        delta.ops.emplace_back(SetConfig{normalize_relative(j.at("file").get<std::string>()),
                                         j.at("key").get<std::string>(),
                                         j.at("value").get<std::string>()});
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown op '" + op + "'", i);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, e.what(), i);
    }
  }
  return delta;
}

nlohmann::json patch_to_json(const PatchDelta& delta) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& op : delta.ops) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, AddFile>) {
            out.push_back({{"op", "add_file"}, {"path", o.path}, {"content", o.content}});
          } else if constexpr (std::is_same_v<T, ReplaceFile>) {
            out.push_back({{"op", "replace_file"}, {"path", o.path}, {"content", o.content}});
          } else if constexpr (std::is_same_v<T, DeleteFile>) {
            out.push_back({{"op", "delete_file"}, {"path", o.path}});
          } else {
            out.push_back({{"op", "set_config"}, {"file", o.file}, {"key", o.key},
                           {"value", o.value}});
          }
        },
        op);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

std::optional<std::string> config_value(std::string_view body,
                                        std::string_view key) {
  const auto lines = text::split_lines(body);
  const auto at = find_config_line(lines, key);
  if (!at) return std::nullopt;
  const std::string_view line = lines[*at];
  return std::string(text::trim(line.substr(line.find('=') + 1)));
}

CheckSpec checks_from_json(const nlohmann::json& doc) {
  if (!doc.is_array() || doc.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "checks must be a non-empty list");
  }
  CheckSpec spec;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    try {
      const std::string kind = j.at("check").get<std::string>();
      if (kind == "file_exists") {
        spec.checks.emplace_back(FileExists{normalize_relative(j.at("path").get<std::string>())});
      } else if (kind == "hash_equals") {
        spec.checks.emplace_back(HashEquals{normalize_relative(j.at("path").get<std::string>()),
                                            j.at("hash").get<std::string>()});
      } else if (kind == "config_equals") {
        spec.checks.emplace_back(ConfigEquals{normalize_relative(j.at("file").get<std::string>()),
                                              j.at("key").get<std::string>(),
                                              j.at("value").get<std::string>()});
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown check '" + kind + "'", i);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, e.what(), i);
    }
  }
  return spec;
}

std::vector<CheckResult> run_checks(const TwinState& twin, const CheckSpec& spec) {
  if (spec.checks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "check list is empty");
  }
  std::vector<CheckResult> out;
  for (const auto& check : spec.checks) {
    CheckResult r;
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, FileExists>) {
            r.description = "FileExists(" + c.path + ")";
            r.passed = find_entry(twin.manifest, c.path) != nullptr;
            if (!r.passed) r.detail = "missing";
          } else if constexpr (std::is_same_v<T, HashEquals>) {
            r.description = "HashEquals(" + c.path + ")";
            const ManifestEntry* e = find_entry(twin.manifest, c.path);
            const std::string actual =
                e == nullptr ? "<missing>"
                             : (e->kind == EntryKind::kDir ? "<dir>" : e->hash);
            r.passed = actual == c.hash;
            if (!r.passed) r.detail = "expected " + c.hash + ", actual " + actual;
          } else {
            r.description = "ConfigEquals(" + c.file + ", " + c.key + ")";
            const ManifestEntry* e = find_entry(twin.manifest, c.file);
            std::optional<std::string> actual;
            if (e != nullptr && e->kind == EntryKind::kFile) {
              actual = config_value(text::read_file((twin.root / c.file).string()),
                                    c.key);
            }
            r.passed = actual && *actual == c.value;
            if (!r.passed) {
              r.detail = "expected " + c.value + ", actual " +
                         (actual ? *actual : std::string("<missing>"));
            }
          }
        },
        check);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diff

TwinDiff diff_states(const Manifest& pre, const Manifest& post) {
  TwinDiff d;
  std::map<std::string_view, const ManifestEntry*> before, after;
  for (const auto& e : pre) before[e.path] = &e;
  for (const auto& e : post) after[e.path] = &e;
  for (const auto& [path, e] : before) {
    const auto it = after.find(path);
    if (it == after.end()) {
      d.removed.emplace_back(path);
    } else if (it->second->hash != e->hash || it->second->mode != e->mode ||
               it->second->kind != e->kind) {
      d.modified.push_back({std::string(path), e->hash, it->second->hash,
                            e->mode, it->second->mode});
    }
  }
  for (const auto& [path, e] : after) {
    if (!before.contains(path)) d.added.emplace_back(path);
  }
  return d;
}

nlohmann::json diff_to_json(const TwinDiff& diff) {
  nlohmann::json modified = nlohmann::json::array();
  for (const auto& m : diff.modified) {
    modified.push_back({{"path", m.path},
                        {"old_hash", m.old_hash},
                        {"new_hash", m.new_hash},
                        {"old_mode", m.old_mode},
                        {"new_mode", m.new_mode}});
  }
  return {{"added", diff.added}, {"removed", diff.removed}, {"modified", modified}};
}

}  // namespace twinforge::twin
