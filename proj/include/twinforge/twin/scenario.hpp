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
#include <optional>
#include <string>
#include <vector>

#include "twinforge/ingest/macro.hpp"
#include "twinforge/twin/twin.hpp"
#include "twinforge/validate/replay.hpp"

namespace twinforge::twin {

struct LoggedEvent {
  std::string scenario;
  validate::ReplayEvent event;
};

// Events of every scenario run against one twin, in run order.
struct EventLog {
  std::vector<LoggedEvent> events;
  std::uint64_t clock_ms = 0;  // simulated; each run starts where the last ended
};

struct ScenarioOutcome {
  bool ok = true;
  std::size_t events = 0;
  std::optional<validate::ReplayFailure> failure;
};

// Replays `script` against the twin (read-only) and appends its events to
// `log`, offset by the log's running clock.
ScenarioOutcome run_scenario(const TwinState& twin,
                             const ingest::MacroScript& script, EventLog& log);

}  // namespace twinforge::twin
