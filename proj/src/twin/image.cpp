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

#include "twinforge/twin/image.hpp"

#include <zlib.h>

#include <chrono>
#include <cstring>
#include <ctime>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::twin {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic{"TWIMG\0", 6};

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view take(std::uint64_t n) {
    need(n);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > bytes_.size() - pos_) {
      throw Error(ErrorCode::kMalformedArchive, "truncated archive");
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string encode_archive(const std::vector<ArchiveEntry>& entries) {
  std::string out(kMagic);
  put_le<std::uint16_t>(out, kArchiveVersion);
  put_le<std::uint64_t>(out, entries.size());
  for (const auto& e : entries) {
    put_le<std::uint8_t>(out, e.kind == EntryKind::kDir ? 1 : 0);
    put_le<std::uint32_t>(out, e.mode);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.path.size()));
    out += e.path;
    put_le<std::uint64_t>(out, e.content.size());
    out += e.content;
  }
  return out;
}

std::vector<ArchiveEntry> decode_archive(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kMalformedArchive, "bad magic");
  }
  if (in.get<std::uint16_t>() != kArchiveVersion) {
    throw Error(ErrorCode::kMalformedArchive, "unsupported archive version");
  }
  const auto count = in.get<std::uint64_t>();
  std::vector<ArchiveEntry> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    ArchiveEntry e;
    const auto kind = in.get<std::uint8_t>();
    if (kind > 1) throw Error(ErrorCode::kMalformedArchive, "bad entry kind");
    e.kind = kind == 1 ? EntryKind::kDir : EntryKind::kFile;
    e.mode = in.get<std::uint32_t>();
    e.path = std::string(in.take(in.get<std::uint32_t>()));
    e.content = std::string(in.take(in.get<std::uint64_t>()));
    if (e.kind == EntryKind::kDir && !e.content.empty()) {
      throw Error(ErrorCode::kMalformedArchive, "directory with content");
    }
    out.push_back(std::move(e));
  }
  if (!in.done()) throw Error(ErrorCode::kMalformedArchive, "trailing bytes");
  return out;
}

TwinImage capture_image(const fs::path& root,
                        const std::vector<std::string>& exclusions) {
  TwinImage image;
  image.exclusions = exclusions;
  image.manifest = scan_tree(root, exclusions);
  image.captured_at = utc_now();

  std::vector<ArchiveEntry> entries;
  entries.reserve(image.manifest.size());
  const fs::path canonical_root = fs::canonical(root);
  for (const auto& m : image.manifest) {
    ArchiveEntry e;
    e.kind = m.kind;
    e.mode = m.mode;
    e.path = m.path;
    if (m.kind == EntryKind::kFile) {
      // Symlinked files were recorded with their target's content.
      e.content = text::read_file(fs::canonical(root / m.path).string());
      if (sha256_hex(e.content) != m.hash) {
        throw Error(ErrorCode::kIo, "file changed during capture: " + m.path);
      }
    }
    entries.push_back(std::move(e));
  }
  image.archive = encode_archive(entries);
  return image;
}

void save_image(const TwinImage& image, const fs::path& dir,
                const std::string& name) {
  nlohmann::json sidecar = {
      {"format_version", 1},
      {"captured_at", image.captured_at},
      {"exclusions", image.exclusions},
      {"archive_sha256", sha256_hex(image.archive)},
      {"manifest", manifest_to_json(image.manifest)}};
  text::write_file((dir / (name + ".twimg")).string(), image.archive);
  text::write_file((dir / (name + ".manifest.json")).string(),
                   sidecar.dump(1) + "\n");
}

TwinImage load_image(const fs::path& twimg_path) {
  fs::path sidecar = twimg_path;
  sidecar.replace_extension(".manifest.json");
  TwinImage image;
  image.archive = text::read_file(twimg_path.string());
  try {
    const auto doc = nlohmann::json::parse(text::read_file(sidecar.string()));
    if (doc.at("format_version").get<int>() != 1) {
      throw Error(ErrorCode::kMalformedArchive, "unsupported sidecar version");
    }
    image.captured_at = doc.at("captured_at").get<std::string>();
    image.exclusions = doc.at("exclusions").get<std::vector<std::string>>();
    image.manifest = manifest_from_json(doc.at("manifest"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedArchive, e.what());
  }
  return image;
}

// ---------------------------------------------------------------------------
// tar.gz export

namespace {

void octal_field(char* field, std::size_t width, std::uint64_t value) {
  // width-1 octal digits followed by NUL.
  field[width - 1] = '\0';
  for (std::size_t i = width - 1; i-- > 0;) {
    field[i] = static_cast<char>('0' + (value & 7));
    value >>= 3;
  }
  if (value != 0) throw Error(ErrorCode::kInvalidArgument, "value too large for ustar field");
}

std::string ustar_header(const ArchiveEntry& e) {
  char h[512];
  std::memset(h, 0, sizeof(h));
  std::string name = e.path + (e.kind == EntryKind::kDir ? "/" : "");
  std::string prefix;
  if (name.size() > 100) {
    const auto cut = name.rfind('/', name.size() - 2);
    if (cut == std::string::npos || cut > 155 || name.size() - cut - 1 > 100) {
      throw Error(ErrorCode::kInvalidPath, "path too long for ustar: " + e.path);
    }
    prefix = name.substr(0, cut);
    name = name.substr(cut + 1);
  }
  std::memcpy(h, name.data(), name.size());
  octal_field(h + 100, 8, e.mode);
  octal_field(h + 108, 8, 0);
  octal_field(h + 116, 8, 0);
  octal_field(h + 124, 12, e.content.size());
  octal_field(h + 136, 12, 0);
  h[156] = e.kind == EntryKind::kDir ? '5' : '0';
  std::memcpy(h + 257, "ustar", 6);
  std::memcpy(h + 263, "00", 2);
  std::memcpy(h + 345, prefix.data(), prefix.size());
  std::memset(h + 148, ' ', 8);
  unsigned sum = 0;
  for (unsigned char c : h) sum += c;
  std::snprintf(h + 148, 8, "%06o", sum);
  h[155] = ' ';
  return std::string(h, sizeof(h));
}

}  // namespace

void export_tar_gz(const TwinImage& image, const fs::path& out) {
  std::string tar;
  for (const auto& e : decode_archive(image.archive)) {
    tar += ustar_header(e);
    tar += e.content;
    tar.append((512 - e.content.size() % 512) % 512, '\0');
  }
  tar.append(1024, '\0');

  gzFile gz = gzopen(out.string().c_str(), "wb9");
  if (gz == nullptr) throw Error(ErrorCode::kIo, "cannot open " + out.string());
  const int written =
      gzwrite(gz, tar.data(), static_cast<unsigned>(tar.size()));
  const int closed = gzclose(gz);
  if (written != static_cast<int>(tar.size()) || closed != Z_OK) {
    throw Error(ErrorCode::kIo, "gzip write failed: " + out.string());
  }
}

}  // namespace twinforge::twin
