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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "twinforge/seq/service_client.hpp"
#include "twinforge/tabular/gan.hpp"
#include "twinforge/tabular/gate.hpp"
#include "twinforge/twin/twin.hpp"

namespace twinforge::cli {

struct NgramSettings {
  int order = 3;
  double delta = 0.01;
  double temperature = 0.8;
  std::size_t max_len = 200;

  bool operator==(const NgramSettings&) const = default;
};

struct PipelineConfig {
  std::string workspace;                 // as written
  std::filesystem::path workspace_root;  // resolved against the config's dir
  std::uint64_t seed = 0;
  tabular::GanConfig gan;
  tabular::GateConfig gate;
  NgramSettings ngram;
  std::optional<seq::EndpointConfig> lm_endpoint;
  std::vector<std::string> exclusions;
  twin::ScreenSize screen;
};

// Strict: unknown keys at any level are UnknownKey, type or range problems
// are ConfigParse naming the field. `base_dir` resolves a relative
// workspace.
PipelineConfig config_from_json(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

// Defaults with the given workspace; used when no config file is passed.
PipelineConfig default_config(const std::string& workspace);

// Full snapshot with defaults filled in; the auth token is redacted.
nlohmann::json config_to_json(const PipelineConfig& config);

// Seeds of the pipeline stages, all derived from the global seed.
enum class Stage : std::uint64_t {
  kTrainTabular = 1,
  kGenTabular = 2,
  kTrainSeq = 3,
  kGenSeq = 4,
};
std::uint64_t stage_seed(std::uint64_t global, Stage stage);

}  // namespace twinforge::cli
