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

#include "twinforge/validate/replay.hpp"

#include <algorithm>
#include <cctype>

#include "twinforge/text.hpp"

namespace twinforge::validate {

using ingest::Verb;

std::string_view to_string(ReplayFailureKind kind) {
  switch (kind) {
    case ReplayFailureKind::kMissingTarget: return "MissingTarget";
    case ReplayFailureKind::kUnknownWindow: return "UnknownWindow";
    case ReplayFailureKind::kOutOfBounds: return "OutOfBounds";
    case ReplayFailureKind::kNoActiveWindow: return "NoActiveWindow";
  }
  return "?";
}

std::string ReplayFailure::label() const {
  return std::string(to_string(kind)) + "@" + std::to_string(command);
}

bool is_executable(const twin::ManifestEntry& entry) {
  return entry.kind == twin::EntryKind::kFile &&
         (entry.path.starts_with("bin/") || entry.path.starts_with("apps/"));
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string base_name(std::string_view path) {
  std::string p(path);
  std::replace(p.begin(), p.end(), '\\', '/');
  const auto slash = p.rfind('/');
  return slash == std::string::npos ? p : p.substr(slash + 1);
}

std::string window_title(std::string_view program) {
  const std::string base = base_name(program);
  const auto dot = base.rfind('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

const twin::ManifestEntry* find_executable(const twin::Manifest& manifest,
                                           std::string_view program) {
  const std::string wanted = lower(base_name(program));
  for (const auto& e : manifest) {
    if (!is_executable(e)) continue;
    if (e.path == program || lower(base_name(e.path)) == wanted) return &e;
  }
  return nullptr;
}

}  // namespace

ReplayResult replay_validate(const ingest::MacroScript& script,
                             const twin::TwinState& twin) {
  ReplayResult result;
  twin::WindowRegistry windows = twin.windows;
  std::uint64_t clock_ms = 0;

  for (std::size_t i = 0; i < script.commands.size(); ++i) {
    const auto& cmd = script.commands[i];
    ReplayEvent ev;
    ev.command = i + 1;
    ev.line = ingest::emit_macro_command(cmd);
    ev.at_ms = clock_ms;
    std::optional<ReplayFailureKind> failure;

    switch (cmd.verb) {
      case Verb::kRun: {
        const auto parts = text::split_whitespace(cmd.args.at(0));
        const std::string_view program =
            parts.empty() ? std::string_view{} : parts.front();
        if (find_executable(twin.manifest, program) == nullptr) {
          failure = ReplayFailureKind::kMissingTarget;
          ev.message = "no executable '" + std::string(program) + "' in twin";
        } else {
          const std::string title = window_title(program);
          if (std::find(windows.open.begin(), windows.open.end(), title) ==
              windows.open.end()) {
            windows.open.push_back(title);
          }
          windows.active = title;
          ev.message = "opened window '" + title + "'";
        }
        break;
      }
      case Verb::kWinActivate:
      case Verb::kWinWaitActive: {
        // A window matches when its title appears in the requested title,
        // case-insensitively ("Untitled - Notepad" matches "notepad").
        const std::string wanted = lower(cmd.args.at(0));
        const auto it = std::find_if(
            windows.open.begin(), windows.open.end(), [&](const std::string& w) {
              return wanted.find(lower(w)) != std::string::npos;
            });
        if (it == windows.open.end()) {
          failure = ReplayFailureKind::kUnknownWindow;
          ev.message = "no open window matches '" + cmd.args.at(0) + "'";
        } else {
          windows.active = *it;
          ev.message = "active window '" + *it + "'";
        }
        break;
      }
      case Verb::kClick: {
        const long long x = std::stoll(cmd.args.at(0));
        const long long y = std::stoll(cmd.args.at(1));
        if (x >= twin.screen.width || y >= twin.screen.height) {
          failure = ReplayFailureKind::kOutOfBounds;
          ev.message = "click outside " + std::to_string(twin.screen.width) +
                       "x" + std::to_string(twin.screen.height);
        }
        break;
      }
      case Verb::kSend:
        if (!windows.active) {
          failure = ReplayFailureKind::kNoActiveWindow;
          ev.message = "no active window to receive keys";
        } else {
          ev.message = "keys to '" + *windows.active + "'";
        }
        break;
      case Verb::kSleep:
        clock_ms += std::stoull(cmd.args.at(0));
        break;
    }

    ev.ok = !failure.has_value();
    result.events.push_back(ev);
    if (failure) {
      result.ok = false;
      result.first_failure = ReplayFailure{*failure, i + 1, ev.message};
      break;
    }
  }
  return result;
}

}  // namespace twinforge::validate
