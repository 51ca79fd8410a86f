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

#include "twinforge/twin/scenario.hpp"

namespace twinforge::twin {

ScenarioOutcome run_scenario(const TwinState& twin,
                             const ingest::MacroScript& script, EventLog& log) {
  const validate::ReplayResult result = validate::replay_validate(script, twin);
  const std::uint64_t base = log.clock_ms;
  std::uint64_t last = 0;
  for (const auto& ev : result.events) {
    LoggedEvent entry{script.name, ev};
    entry.event.at_ms += base;
    last = ev.at_ms;
    log.events.push_back(std::move(entry));
  }
  // Trailing sleeps advance the clock past the last event's start.
  std::uint64_t total = last;
  if (!result.events.empty()) {
    const auto& cmd = script.commands[result.events.back().command - 1];
    if (cmd.verb == ingest::Verb::kSleep && result.events.back().ok) {
      total += std::stoull(cmd.args.at(0));
    }
  }
  log.clock_ms = base + total;
  return {result.ok, result.events.size(), result.first_failure};
}

}  // namespace twinforge::twin
