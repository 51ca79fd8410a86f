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

#include <string>
#include <string_view>
#include <vector>

namespace twinforge::ingest {

// The six-verb AutoHotkey-like subset:
//   Run, <target>            launch a program
//   Send, <keys>             type into the active window
//   Click, <x>, <y>          left click at screen coordinates
//   Sleep, <ms>              wait
//   WinActivate, <title>     focus a window
//   WinWaitActive, <title>   wait for a window to become active
enum class Verb { kRun, kSend, kClick, kSleep, kWinActivate, kWinWaitActive };

std::string_view to_string(Verb verb);

struct MacroCommand {
  Verb verb = Verb::kSleep;
  // Canonical argument text: integers without sign or leading zeros,
  // strings trimmed.
  std::vector<std::string> args;

  bool operator==(const MacroCommand&) const = default;
};

struct MacroScript {
  std::string name;
  std::vector<MacroCommand> commands;

  bool operator==(const MacroScript&) const = default;
};

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

// Parses one command line. `position` is reported in errors.
MacroCommand parse_macro_command(std::string_view line, std::size_t position);

// Blank lines and `;` comments are skipped. Errors carry the 1-based line.
// A script with no commands is EmptyScript.
MacroScript parse_macro_script(std::string_view text, std::string name = {});
MacroScript read_macro_script(const std::string& path);

std::string emit_macro_command(const MacroCommand& command);
// One canonical line per command; throws EmptyScript on no commands.
std::string emit_macro_script(const MacroScript& script);

// BOS, one token per command (its canonical line), EOS.
std::vector<std::string> tokenize_script(const MacroScript& script);

}  // namespace twinforge::ingest
