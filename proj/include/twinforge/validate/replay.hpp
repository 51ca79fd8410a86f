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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twinforge/ingest/macro.hpp"
#include "twinforge/twin/twin.hpp"

namespace twinforge::validate {

enum class ReplayFailureKind {
  kMissingTarget,   // Run target is not an executable in the twin
  kUnknownWindow,   // WinActivate/WinWaitActive on a window never opened
  kOutOfBounds,     // Click outside the virtual screen
  kNoActiveWindow,  // Send with nothing focused
};

std::string_view to_string(ReplayFailureKind kind);

struct ReplayFailure {
  ReplayFailureKind kind = ReplayFailureKind::kMissingTarget;
  std::size_t command = 0;  // 1-based
  std::string reason;

  // e.g. "MissingTarget@1"
  std::string label() const;
  bool operator==(const ReplayFailure&) const = default;
};

struct ReplayEvent {
  std::size_t command = 0;  // 1-based
  std::string line;         // canonical command text
  bool ok = true;
  std::string message;
  std::uint64_t at_ms = 0;  // simulated clock; Sleep advances it

  bool operator==(const ReplayEvent&) const = default;
};

struct ReplayResult {
  bool ok = true;
  std::vector<ReplayEvent> events;  // ends at the first failure
  std::optional<ReplayFailure> first_failure;
};

// Executables are manifest files under bin/ or apps/.
bool is_executable(const twin::ManifestEntry& entry);

// Dry-run interpretation against the twin's manifest and window registry.
// The twin is not modified.
ReplayResult replay_validate(const ingest::MacroScript& script,
                             const twin::TwinState& twin);

}  // namespace twinforge::validate
