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

#include "twinforge/ingest/macro.hpp"

#include <array>
#include <cctype>
#include <filesystem>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::ingest {

namespace {

struct VerbInfo {
  Verb verb;
  std::string_view name;
};

constexpr std::array<VerbInfo, 6> kVerbs{{
    {Verb::kRun, "Run"},
    {Verb::kSend, "Send"},
    {Verb::kClick, "Click"},
    {Verb::kSleep, "Sleep"},
    {Verb::kWinActivate, "WinActivate"},
    {Verb::kWinWaitActive, "WinWaitActive"},
}};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

// Non-negative integer in canonical form, or an error.
std::string canonical_nonneg(std::string_view s, std::size_t position) {
  const auto v = text::parse_integer(text::trim(s));
  if (!v || *v < 0) {
    throw Error(ErrorCode::kBadArg,
                "expected a non-negative integer, got '" + std::string(s) + "'",
                position);
  }
  return std::to_string(*v);
}

}  // namespace

std::string_view to_string(Verb verb) {
  for (const auto& v : kVerbs) {
    if (v.verb == verb) return v.name;
  }
  return "?";
}

MacroCommand parse_macro_command(std::string_view line, std::size_t position) {
  line = text::trim(line);
  const auto comma = line.find(',');
  const std::string_view verb_text = text::trim(line.substr(0, comma));
  const VerbInfo* info = nullptr;
  for (const auto& v : kVerbs) {
    if (iequals(v.name, verb_text)) info = &v;
  }
  if (info == nullptr) {
    throw Error(ErrorCode::kUnknownVerb,
                "unknown verb '" + std::string(verb_text) + "'", position);
  }
  const std::string_view rest =
      comma == std::string_view::npos ? std::string_view{}
                                      : text::trim(line.substr(comma + 1));
  if (rest.empty()) {
    throw Error(ErrorCode::kBadArity,
                std::string(info->name) + " needs an argument", position);
  }

  MacroCommand cmd;
  cmd.verb = info->verb;
  switch (info->verb) {
    case Verb::kClick: {
      const auto second = rest.find(',');
      if (second == std::string_view::npos ||
          rest.find(',', second + 1) != std::string_view::npos) {
        throw Error(ErrorCode::kBadArity, "Click takes exactly x, y", position);
      }
      cmd.args.push_back(canonical_nonneg(rest.substr(0, second), position));
      cmd.args.push_back(canonical_nonneg(rest.substr(second + 1), position));
      break;
    }
    case Verb::kSleep:
      if (rest.find(',') != std::string_view::npos) {
        throw Error(ErrorCode::kBadArity, "Sleep takes one argument", position);
      }
      cmd.args.push_back(canonical_nonneg(rest, position));
      break;
    default:
      // Single free-text argument: the rest of the line, commas included.
      cmd.args.emplace_back(rest);
  }
  return cmd;
}

MacroScript parse_macro_script(std::string_view text, std::string name) {
  MacroScript script;
  script.name = std::move(name);
  const auto lines = text::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = text::trim(lines[i]);
    if (line.empty() || line.front() == ';') continue;
    script.commands.push_back(parse_macro_command(line, i + 1));
  }
  if (script.commands.empty()) {
    throw Error(ErrorCode::kEmptyScript, "script has no commands");
  }
  return script;
}

MacroScript read_macro_script(const std::string& path) {
  return parse_macro_script(text::read_file(path),
                            std::filesystem::path(path).stem().string());
}

std::string emit_macro_command(const MacroCommand& command) {
  std::string out(to_string(command.verb));
  for (const auto& arg : command.args) {
    out += ", ";
    out += arg;
  }
  return out;
}

std::string emit_macro_script(const MacroScript& script) {
  if (script.commands.empty()) {
    throw Error(ErrorCode::kEmptyScript, "script has no commands");
  }
  std::string out;
  for (const auto& cmd : script.commands) {
    out += emit_macro_command(cmd);
    out.push_back('\n');
  }
  return out;
}

std::vector<std::string> tokenize_script(const MacroScript& script) {
  std::vector<std::string> tokens;
  tokens.reserve(script.commands.size() + 2);
  tokens.emplace_back(kBos);
  for (const auto& cmd : script.commands) {
    tokens.push_back(emit_macro_command(cmd));
  }
  tokens.emplace_back(kEos);
  return tokens;
}

}  // namespace twinforge::ingest
