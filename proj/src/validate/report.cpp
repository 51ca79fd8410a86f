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

#include "twinforge/validate/report.hpp"

#include <cstdio>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"
#include "twinforge/twin/manifest.hpp"

namespace twinforge::validate {

using nlohmann::json;

std::optional<double> ComparisonReport::mean_cosine() const {
  if (scripts.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& s : scripts) sum += s.cosine;
  return sum / static_cast<double>(scripts.size());
}

std::optional<double> ComparisonReport::mean_bleu() const {
  if (scripts.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& s : scripts) sum += s.bleu;
  return sum / static_cast<double>(scripts.size());
}

std::size_t ComparisonReport::replayed() const {
  std::size_t n = 0;
  for (const auto& s : scripts) n += s.replay_ok ? 1 : 0;
  return n;
}

ComparisonReport build_report(const ReportInputs& in) {
  if (in.real == nullptr || in.synth == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "report needs real and synthetic datasets");
  }
  ComparisonReport r;
  r.config = in.config;
  r.seeds = in.seeds;
  r.run_id = make_run_id(in.config, in.seeds.global);
  r.real_stats = summary_stats(*in.real);
  r.synth_stats = summary_stats(*in.synth);
  r.deltas = compare_stats(r.real_stats, r.synth_stats);
  r.distances = tabular::gate_distances(*in.real, *in.synth, in.gate);
  r.gate_verified = tabular::gate_accepts(r.distances);
  r.gate_attempts = in.gate_attempts;
  r.scripts = in.scripts;
  return r;
}

std::string make_run_id(const json& config, std::uint64_t seed) {
  return twin::sha256_hex(config.dump() + "\n" + std::to_string(seed)).substr(0, 16);
}

namespace {

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json stats_to_json(const SummaryStats& s) {
  json cols = json::array();
  for (const auto& c : s.columns) {
    json j{{"column", c.column}, {"kind", ingest::to_string(c.kind)}};
    if (c.kind == ingest::ColumnKind::kContinuous) {
      j["mean"] = c.mean;
    } else {
      j["modal_category"] = c.modal_category;
      j["modal_count"] = c.modal_count;
    }
    cols.push_back(std::move(j));
  }
  return {{"rows", s.rows}, {"columns", std::move(cols)}};
}

SummaryStats stats_from_json(const json& j) {
  SummaryStats s;
  s.rows = j.at("rows").get<std::size_t>();
  for (const auto& c : j.at("columns")) {
    ColumnSummary col;
    col.column = c.at("column").get<std::string>();
    col.kind = ingest::column_kind_from_string(c.at("kind").get<std::string>());
    if (col.kind == ingest::ColumnKind::kContinuous) {
      col.mean = c.at("mean").get<double>();
    } else {
      col.modal_category = c.at("modal_category").get<std::string>();
      col.modal_count = c.at("modal_count").get<std::size_t>();
    }
    s.columns.push_back(std::move(col));
  }
  return s;
}

json delta_to_json(const FieldDelta& d) {
  json j{{"column", d.column}, {"kind", ingest::to_string(d.kind)}};
  if (d.kind == ingest::ColumnKind::kContinuous) {
    j["real_mean"] = d.real_mean;
    j["synth_mean"] = d.synth_mean;
    j["abs_delta"] = d.abs_delta;
    j["rel_delta"] = d.rel_delta;
  } else {
    j["real_modal"] = d.real_modal;
    j["synth_modal"] = d.synth_modal;
    j["modal_match"] = d.modal_match;
  }
  return j;
}

FieldDelta delta_from_json(const json& j) {
  FieldDelta d;
  d.column = j.at("column").get<std::string>();
  d.kind = ingest::column_kind_from_string(j.at("kind").get<std::string>());
  if (d.kind == ingest::ColumnKind::kContinuous) {
    d.real_mean = j.at("real_mean").get<double>();
    d.synth_mean = j.at("synth_mean").get<double>();
    d.abs_delta = j.at("abs_delta").get<double>();
    d.rel_delta = j.at("rel_delta").get<double>();
    d.modal_match = true;
  } else {
    d.real_modal = j.at("real_modal").get<std::string>();
    d.synth_modal = j.at("synth_modal").get<std::string>();
    d.modal_match = j.at("modal_match").get<bool>();
  }
  return d;
}

std::string_view distance_kind_name(tabular::DistanceKind k) {
  return k == tabular::DistanceKind::kEmd ? "emd" : "tv";
}

tabular::DistanceKind distance_kind_from(const std::string& s) {
  if (s == "emd") return tabular::DistanceKind::kEmd;
  if (s == "tv") return tabular::DistanceKind::kTotalVariation;
  throw Error(ErrorCode::kMalformedReport, "unknown distance kind '" + s + "'");
}

json event_to_json(const ReplayEvent& e) {
  return {{"command", e.command}, {"line", e.line}, {"ok", e.ok},
          {"message", e.message}, {"at_ms", e.at_ms}};
}

ReplayEvent event_from_json(const json& j) {
  ReplayEvent e;
  e.command = j.at("command").get<std::size_t>();
  e.line = j.at("line").get<std::string>();
  e.ok = j.at("ok").get<bool>();
  e.message = j.at("message").get<std::string>();
  e.at_ms = j.at("at_ms").get<std::uint64_t>();
  return e;
}

json to_json(const ComparisonReport& r) {
  json deltas = json::array();
  for (const auto& d : r.deltas) deltas.push_back(delta_to_json(d));
  json distances = json::array();
  for (const auto& d : r.distances) {
    distances.push_back({{"column", d.column},
                         {"kind", distance_kind_name(d.kind)},
                         {"distance", optional_to_json(d.distance)},
                         {"threshold", d.threshold},
                         {"passes", d.passes()}});
  }
  json scripts = json::array();
  for (const auto& s : r.scripts) {
    json events = json::array();
    for (const auto& e : s.events) events.push_back(event_to_json(e));
    scripts.push_back({{"name", s.name},
                       {"prompt", s.prompt},
                       {"cosine", s.cosine},
                       {"bleu", s.bleu},
                       {"replay_ok", s.replay_ok},
                       {"first_failure", s.first_failure ? json(*s.first_failure)
                                                          : json(nullptr)},
                       {"events", std::move(events)}});
  }
  return {{"format_version", kReportFormatVersion},
          {"run_id", r.run_id},
          {"config", r.config},
          {"seeds",
           {{"global", r.seeds.global},
            {"tabular", r.seeds.tabular},
            {"sequence", r.seeds.sequence}}},
          {"real_stats", stats_to_json(r.real_stats)},
          {"synth_stats", stats_to_json(r.synth_stats)},
          {"deltas", std::move(deltas)},
          {"distances", std::move(distances)},
          {"gate", {{"attempts", r.gate_attempts}, {"verified", r.gate_verified}}},
          {"scripts", std::move(scripts)},
          {"script_summary",
           {{"count", r.scripts.size()},
            {"replayed", r.replayed()},
            {"mean_cosine", optional_to_json(r.mean_cosine())},
            {"mean_bleu", optional_to_json(r.mean_bleu())}}}};
}

}  // namespace

std::string serialize_report(const ComparisonReport& report) {
  return to_json(report).dump(2) + "\n";
}

ComparisonReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != kReportFormatVersion) {
      throw Error(ErrorCode::kMalformedReport, "unsupported format_version");
    }
    ComparisonReport r;
    r.run_id = j.at("run_id").get<std::string>();
    r.config = j.at("config");
    const json& seeds = j.at("seeds");
    r.seeds.global = seeds.at("global").get<std::uint64_t>();
    r.seeds.tabular = seeds.at("tabular").get<std::uint64_t>();
    r.seeds.sequence = seeds.at("sequence").get<std::uint64_t>();
    r.real_stats = stats_from_json(j.at("real_stats"));
    r.synth_stats = stats_from_json(j.at("synth_stats"));
    for (const auto& d : j.at("deltas")) r.deltas.push_back(delta_from_json(d));
    for (const auto& d : j.at("distances")) {
      tabular::ColumnDistance cd;
      cd.column = d.at("column").get<std::string>();
      cd.kind = distance_kind_from(d.at("kind").get<std::string>());
      if (!d.at("distance").is_null()) cd.distance = d.at("distance").get<double>();
      cd.threshold = d.at("threshold").get<double>();
      r.distances.push_back(std::move(cd));
    }
    r.gate_attempts = j.at("gate").at("attempts").get<int>();
    r.gate_verified = j.at("gate").at("verified").get<bool>();
    for (const auto& s : j.at("scripts")) {
      ScriptMetrics m;
      m.name = s.at("name").get<std::string>();
      m.prompt = s.at("prompt").get<std::string>();
      m.cosine = s.at("cosine").get<double>();
      m.bleu = s.at("bleu").get<double>();
      m.replay_ok = s.at("replay_ok").get<bool>();
      if (!s.at("first_failure").is_null()) {
        m.first_failure = s.at("first_failure").get<std::string>();
      }
      for (const auto& e : s.at("events")) m.events.push_back(event_from_json(e));
      r.scripts.push_back(std::move(m));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedReport, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedReport) throw;
    throw Error(ErrorCode::kMalformedReport, e.what());
  }
}

std::filesystem::path report_path(const std::filesystem::path& reports_dir,
                                  const std::string& run_id) {
  return reports_dir / ("report-" + run_id + ".json");
}

void save_report(const ComparisonReport& report, const std::filesystem::path& path) {
  text::write_file(path, serialize_report(report));
}

ComparisonReport load_report(const std::filesystem::path& path) {
  return parse_report(text::read_file(path));
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render_report(const ComparisonReport& r) {
  std::string out = "run " + r.run_id + "  seed " + std::to_string(r.seeds.global) +
                    "\nrows: real " + std::to_string(r.real_stats.rows) + ", synthetic " +
                    std::to_string(r.synth_stats.rows) + "\n\n";
  out += "column            recorded      synthetic     delta\n";
  for (const auto& d : r.deltas) {
    char line[256];
    if (d.kind == ingest::ColumnKind::kContinuous) {
      std::snprintf(line, sizeof line, "%-16s  %-12s  %-12s  %s (%.1f%%)\n",
                    d.column.c_str(), fixed(d.real_mean).c_str(),
                    fixed(d.synth_mean).c_str(), fixed(d.abs_delta).c_str(),
                    100.0 * d.rel_delta);
    } else {
      std::snprintf(line, sizeof line, "%-16s  %-12s  %-12s  %s\n", d.column.c_str(),
                    d.real_modal.c_str(), d.synth_modal.c_str(),
                    d.modal_match ? "match" : "MISMATCH");
    }
    out += line;
  }
  out += "\ngate: " + std::to_string(r.gate_attempts) + " attempt(s), recheck " +
         (r.gate_verified ? "passed" : "FAILED") + "\n";
  for (const auto& d : r.distances) {
    out += "  " + d.column + " " + std::string(distance_kind_name(d.kind)) + " " +
           (d.distance ? fixed(*d.distance) : std::string("skipped")) + " <= " +
           fixed(d.threshold) + "\n";
  }
  if (!r.scripts.empty()) {
    out += "\nscripts:\n";
    for (const auto& s : r.scripts) {
      out += "  " + s.name + "  cosine " + fixed(s.cosine) + "  bleu " + fixed(s.bleu) +
             "  replay " + (s.replay_ok ? "ok" : "fail " + s.first_failure.value_or("")) +
             "\n";
    }
    out += "  mean cosine " + fixed(*r.mean_cosine()) + ", mean bleu " +
           fixed(*r.mean_bleu()) + ", replayed " + std::to_string(r.replayed()) + "/" +
           std::to_string(r.scripts.size()) + "\n";
  }
  return out;
}

}  // namespace twinforge::validate
