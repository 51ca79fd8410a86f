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

#include "twinforge/cli/config.hpp"

#include <set>

#include "twinforge/error.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/text.hpp"

namespace twinforge::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kConfigParse, field + ": " + why);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) bad_field(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) {
      throw Error(ErrorCode::kUnknownKey,
                  "unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

double get_number(const json& obj, const std::string& key, const std::string& field,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad_field(field, "expected a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& obj, const std::string& key,
                           const std::string& field, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) bad_field(field, "must not be negative");
  bad_field(field, "expected a non-negative integer");
}

int get_int(const json& obj, const std::string& key, const std::string& field,
            int fallback) {
  const auto v = get_unsigned(obj, key, field, static_cast<std::uint64_t>(fallback));
  if (v > 1000000000ULL) bad_field(field, "too large");
  return static_cast<int>(v);
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& field, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) bad_field(field, "expected a string");
  return v.get<std::string>();
}

// Re-raises a component validate() failure as a config error on `field`.
template <typename F>
void validated(const std::string& field, F&& check) {
  try {
    check();
  } catch (const Error& e) {
    bad_field(field, e.what());
  }
}

}  // namespace

PipelineConfig default_config(const std::string& workspace) {
  PipelineConfig c;
  c.workspace = workspace;
  c.workspace_root = workspace;
  c.exclusions = twin::kDefaultExclusions;
  return c;
}

PipelineConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc, "", {"workspace", "seed", "gan", "gate", "ngram", "lm_endpoint",
                           "exclusions", "screen"});
  if (!doc.contains("workspace")) bad_field("workspace", "required");
  PipelineConfig c = default_config(get_string(doc, "workspace", "workspace", ""));
  if (c.workspace.empty()) bad_field("workspace", "must not be empty");
  c.workspace_root = std::filesystem::path(c.workspace).is_absolute()
                         ? std::filesystem::path(c.workspace)
                         : base_dir / c.workspace;
  c.seed = get_unsigned(doc, "seed", "seed", 0);

  if (doc.contains("gan")) {
    const json& g = doc.at("gan");
    reject_unknown(g, "gan", {"epochs", "batch", "noise_dim", "hidden", "max_modes",
                              "learning_rate", "beta1", "beta2", "gumbel_tau"});
    c.gan.epochs = get_int(g, "epochs", "gan.epochs", c.gan.epochs);
    c.gan.batch = get_unsigned(g, "batch", "gan.batch", c.gan.batch);
    c.gan.noise_dim = get_unsigned(g, "noise_dim", "gan.noise_dim", c.gan.noise_dim);
    c.gan.hidden = get_unsigned(g, "hidden", "gan.hidden", c.gan.hidden);
    c.gan.max_modes = get_unsigned(g, "max_modes", "gan.max_modes", c.gan.max_modes);
    c.gan.learning_rate =
        get_number(g, "learning_rate", "gan.learning_rate", c.gan.learning_rate);
    c.gan.beta1 = get_number(g, "beta1", "gan.beta1", c.gan.beta1);
    c.gan.beta2 = get_number(g, "beta2", "gan.beta2", c.gan.beta2);
    c.gan.gumbel_tau = get_number(g, "gumbel_tau", "gan.gumbel_tau", c.gan.gumbel_tau);
  }
  validated("gan", [&] { c.gan.validate(); });

  if (doc.contains("gate")) {
    const json& g = doc.at("gate");
    reject_unknown(g, "gate", {"tau_continuous", "tau_discrete", "max_attempts"});
    c.gate.tau_continuous =
        get_number(g, "tau_continuous", "gate.tau_continuous", c.gate.tau_continuous);
    c.gate.tau_discrete =
        get_number(g, "tau_discrete", "gate.tau_discrete", c.gate.tau_discrete);
    c.gate.max_attempts = get_int(g, "max_attempts", "gate.max_attempts", c.gate.max_attempts);
  }
  validated("gate", [&] { c.gate.validate(); });

  if (doc.contains("ngram")) {
    const json& n = doc.at("ngram");
    reject_unknown(n, "ngram", {"order", "delta", "temperature", "max_len"});
    c.ngram.order = get_int(n, "order", "ngram.order", c.ngram.order);
    c.ngram.delta = get_number(n, "delta", "ngram.delta", c.ngram.delta);
    c.ngram.temperature =
        get_number(n, "temperature", "ngram.temperature", c.ngram.temperature);
    c.ngram.max_len = get_unsigned(n, "max_len", "ngram.max_len", c.ngram.max_len);
  }
  if (c.ngram.order < 1) bad_field("ngram.order", "must be at least 1");
  if (!(c.ngram.delta > 0.0)) bad_field("ngram.delta", "must be positive");
  if (!(c.ngram.temperature >= 0.0)) bad_field("ngram.temperature", "must be >= 0");
  if (c.ngram.max_len < 1) bad_field("ngram.max_len", "must be at least 1");

  if (doc.contains("lm_endpoint") && !doc.at("lm_endpoint").is_null()) {
    const json& e = doc.at("lm_endpoint");
    reject_unknown(e, "lm_endpoint", {"url", "auth_token", "timeout_ms"});
    seq::EndpointConfig ep;
    ep.url = get_string(e, "url", "lm_endpoint.url", "");
    if (!ep.url.starts_with("http://")) bad_field("lm_endpoint.url", "must be an http:// URL");
    ep.auth_token = get_string(e, "auth_token", "lm_endpoint.auth_token", "");
    ep.timeout_ms = get_int(e, "timeout_ms", "lm_endpoint.timeout_ms", ep.timeout_ms);
    if (ep.timeout_ms < 1 || ep.timeout_ms > 600000) {
      bad_field("lm_endpoint.timeout_ms", "must be in 1..600000");
    }
    c.lm_endpoint = ep;
  }

  if (doc.contains("exclusions")) {
    const json& ex = doc.at("exclusions");
    if (!ex.is_array()) bad_field("exclusions", "expected a list of globs");
    c.exclusions.clear();
    for (const auto& g : ex) {
      if (!g.is_string() || g.get<std::string>().empty()) {
        bad_field("exclusions", "globs must be non-empty strings");
      }
      c.exclusions.push_back(g.get<std::string>());
    }
  }

  if (doc.contains("screen")) {
    const json& s = doc.at("screen");
    reject_unknown(s, "screen", {"width", "height"});
    const auto w = get_unsigned(s, "width", "screen.width", 1920);
    const auto h = get_unsigned(s, "height", "screen.height", 1080);
    if (w == 0 || h == 0 || w > 100000 || h > 100000) {
      bad_field("screen", "dimensions must be in 1..100000");
    }
    c.screen = {static_cast<int>(w), static_cast<int>(h)};
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const std::string text = text::read_file(path.string());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset -> 1-based line.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw Error(ErrorCode::kConfigParse, path.string() + ": invalid JSON", line);
  }
  return config_from_json(doc, path.parent_path().empty() ? "." : path.parent_path());
}

json config_to_json(const PipelineConfig& c) {
  json doc{
      {"workspace", c.workspace},
      {"seed", c.seed},
      {"gan",
       {{"epochs", c.gan.epochs},
        {"batch", c.gan.batch},
        {"noise_dim", c.gan.noise_dim},
        {"hidden", c.gan.hidden},
        {"max_modes", c.gan.max_modes},
        {"learning_rate", c.gan.learning_rate},
        {"beta1", c.gan.beta1},
        {"beta2", c.gan.beta2},
        {"gumbel_tau", c.gan.gumbel_tau}}},
      {"gate",
       {{"tau_continuous", c.gate.tau_continuous},
        {"tau_discrete", c.gate.tau_discrete},
        {"max_attempts", c.gate.max_attempts}}},
      {"ngram",
       {{"order", c.ngram.order},
        {"delta", c.ngram.delta},
        {"temperature", c.ngram.temperature},
        {"max_len", c.ngram.max_len}}},
      {"lm_endpoint", nullptr},
      {"exclusions", c.exclusions},
      {"screen", {{"width", c.screen.width}, {"height", c.screen.height}}}};
  if (c.lm_endpoint) {
    doc["lm_endpoint"] = {{"url", c.lm_endpoint->url},
                          {"auth_token", c.lm_endpoint->auth_token.empty() ? "" : "<redacted>"},
                          {"timeout_ms", c.lm_endpoint->timeout_ms}};
  }
  return doc;
}

std::uint64_t stage_seed(std::uint64_t global, Stage stage) {
  return mix_seed(global, static_cast<std::uint64_t>(stage));
}

}  // namespace twinforge::cli
