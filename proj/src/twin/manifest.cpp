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

#include "twinforge/twin/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::twin {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

bool glob_impl(std::string_view p, std::string_view s) {
  while (!p.empty()) {
    if (p.starts_with("**")) {
      std::string_view rest = p.substr(2);
      // "**/" may also stand for zero directories.
      if (rest.starts_with('/') && glob_impl(rest.substr(1), s)) return true;
      for (std::size_t i = 0; i <= s.size(); ++i) {
        if (glob_impl(rest, s.substr(i))) return true;
      }
      return false;
    }
    if (p.front() == '*') {
      std::string_view rest = p.substr(1);
      for (std::size_t i = 0; i <= s.size(); ++i) {
        if (glob_impl(rest, s.substr(i))) return true;
        if (i < s.size() && s[i] == '/') break;
      }
      return false;
    }
    if (s.empty()) return false;
    if (p.front() == '?') {
      if (s.front() == '/') return false;
    } else if (p.front() != s.front()) {
      return false;
    }
    p.remove_prefix(1);
    s.remove_prefix(1);
  }
  return s.empty();
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  if (pattern.ends_with("/**") &&
      glob_impl(pattern.substr(0, pattern.size() - 3), path)) {
    return true;
  }
  return glob_impl(pattern, path);
}

bool is_excluded(std::string_view path, const std::vector<std::string>& globs) {
  return std::any_of(globs.begin(), globs.end(), [&](const std::string& g) {
    return glob_match(g, path);
  });
}

std::string normalize_relative(std::string_view path) {
  if (path.empty()) throw Error(ErrorCode::kInvalidPath, "empty path");
  if (path.front() == '/' || path.front() == '\\') {
    throw Error(ErrorCode::kInvalidPath, "absolute path: " + std::string(path));
  }
  std::string out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t slash = path.find('/', start);
    const std::string_view seg = path.substr(
        start, slash == std::string_view::npos ? std::string_view::npos
                                               : slash - start);
    if (seg == "..") {
      throw Error(ErrorCode::kInvalidPath, "'..' in path: " + std::string(path));
    }
    if (!seg.empty() && seg != ".") {
      if (!out.empty()) out.push_back('/');
      out.append(seg);
    }
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidPath, "empty path");
  return out;
}

const ManifestEntry* find_entry(const Manifest& manifest, std::string_view path) {
  const auto it = std::lower_bound(
      manifest.begin(), manifest.end(), path,
      [](const ManifestEntry& e, std::string_view p) { return e.path < p; });
  if (it == manifest.end() || it->path != path) return nullptr;
  return &*it;
}

namespace {

bool within(const fs::path& root, const fs::path& target) {
  auto r = root.begin();
  auto t = target.begin();
  for (; r != root.end(); ++r, ++t) {
    if (t == target.end() || *r != *t) return false;
  }
  return true;
}

std::uint32_t mode_bits(const fs::path& p) {
  return static_cast<std::uint32_t>(fs::status(p).permissions() &
                                    fs::perms::mask) &
         0777u;
}

void walk(const fs::path& root, const fs::path& canonical_root,
          const fs::path& dir, const std::string& prefix,
          const std::vector<std::string>& exclusions,
          const std::vector<std::string>& ignore_names, Manifest& out) {
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    const std::string name = entry.path().filename().string();
    if (prefix.empty() &&
        std::find(ignore_names.begin(), ignore_names.end(), name) !=
            ignore_names.end()) {
      continue;
    }
    const std::string rel = prefix.empty() ? name : prefix + "/" + name;
    if (is_excluded(rel, exclusions)) continue;

    const fs::file_status link_status = entry.symlink_status();
    bool follow_dir = true;
    fs::path source = entry.path();
    if (fs::is_symlink(link_status)) {
      const fs::path target = fs::weakly_canonical(entry.path(), ec);
      if (ec || !within(canonical_root, target)) {
        throw Error(ErrorCode::kSymlinkOutsideRoot,
                    rel + " -> " + fs::read_symlink(entry.path()).string());
      }
      if (!fs::exists(target)) {
        throw Error(ErrorCode::kIo, "dangling symlink " + rel);
      }
      source = target;
      follow_dir = false;
    }
    const fs::file_status st = fs::status(source);
    ManifestEntry e;
    e.path = rel;
    e.mode = mode_bits(source);
    if (fs::is_directory(st)) {
      e.kind = EntryKind::kDir;
      out.push_back(e);
      if (follow_dir) {
        walk(root, canonical_root, entry.path(), rel, exclusions, ignore_names,
             out);
      }
    } else if (fs::is_regular_file(st)) {
      const std::string content = text::read_file(source.string());
      e.kind = EntryKind::kFile;
      e.size = content.size();
      e.hash = sha256_hex(content);
      out.push_back(std::move(e));
    }
    // Sockets, fifos and devices are not part of an image.
  }
}

}  // namespace

Manifest scan_tree(const fs::path& root,
                   const std::vector<std::string>& exclusions,
                   const std::vector<std::string>& ignore_names) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + root.string());
  }
  const fs::path canonical_root = fs::canonical(root);
  Manifest out;
  walk(root, canonical_root, root, "", exclusions, ignore_names, out);
  std::sort(out.begin(), out.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.path < b.path;
            });
  return out;
}

nlohmann::json manifest_to_json(const Manifest& manifest) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : manifest) {
    out.push_back({{"path", e.path},
                   {"kind", e.kind == EntryKind::kDir ? "dir" : "file"},
                   {"size", e.size},
                   {"hash", e.hash},
                   {"mode", e.mode}});
  }
  return out;
}

Manifest manifest_from_json(const nlohmann::json& doc) {
  Manifest out;
  try {
    for (const auto& j : doc) {
      ManifestEntry e;
      e.path = normalize_relative(j.at("path").get<std::string>());
      const std::string kind = j.at("kind").get<std::string>();
      if (kind != "dir" && kind != "file") {
        throw Error(ErrorCode::kMalformedArchive, "bad entry kind " + kind);
      }
      e.kind = kind == "dir" ? EntryKind::kDir : EntryKind::kFile;
      e.size = j.at("size").get<std::uint64_t>();
      e.hash = j.at("hash").get<std::string>();
      e.mode = j.at("mode").get<std::uint32_t>();
      if (!out.empty() && !(out.back().path < e.path)) {
        throw Error(ErrorCode::kMalformedArchive, "manifest not sorted");
      }
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedArchive, e.what());
  }
  return out;
}

}  // namespace twinforge::twin
