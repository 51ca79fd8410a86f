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

#include "twinforge/cli/app.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "twinforge/cli/config.hpp"
#include "twinforge/ingest/macro.hpp"
#include "twinforge/ingest/top.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/seq/ngram.hpp"
#include "twinforge/seq/service_client.hpp"
#include "twinforge/tabular/gan.hpp"
#include "twinforge/tabular/gate.hpp"
#include "twinforge/text.hpp"
#include "twinforge/twin/image.hpp"
#include "twinforge/twin/scenario.hpp"
#include "twinforge/twin/twin.hpp"
#include "twinforge/validate/metrics.hpp"
#include "twinforge/validate/replay.hpp"
#include "twinforge/validate/report.hpp"

namespace twinforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kGateExhausted: return kExitFailed;
    default: return kExitData;
  }
}

WorkspaceLock::WorkspaceLock(const fs::path& workspace) {
  const fs::path path = workspace / "workspace.lock";
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::kLocked, "workspace is in use: " + workspace.string());
  }
}

WorkspaceLock::~WorkspaceLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

namespace {

constexpr const char* kGateSuffix = ".gate.json";

struct Context {
  PipelineConfig config;
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;

  fs::path dir(const char* sub) const { return config.workspace_root / sub; }
  std::ostream& info() const {
    static std::ostream null_stream(nullptr);
    return quiet ? null_stream : out;
  }
};

// --- shared helpers --------------------------------------------------------

ingest::TabularDataset read_table(const fs::path& path,
                                  const ingest::KindOverrides* kinds = nullptr) {
  const std::string text = text::read_file(path.string());
  if (kinds != nullptr) return ingest::parse_dataset_csv(text, *kinds);
  // Process captures keep their fixed schema even when a numeric column has
  // few distinct values.
  const auto records = ingest::parse_csv_records(text);
  ingest::KindOverrides overrides;
  if (!records.empty()) {
    const auto& header = records.front();
    bool is_process = true;
    const ingest::Schema schema = ingest::process_schema();
    for (const auto& col : schema.columns()) {
      is_process = is_process &&
                   std::find(header.begin(), header.end(), col.name) != header.end();
    }
    if (is_process) overrides = ingest::process_kind_overrides();
  }
  return ingest::parse_dataset_csv(text, overrides);
}

ingest::KindOverrides kinds_of(const ingest::TabularDataset& dataset) {
  ingest::KindOverrides kinds;
  for (const auto& col : dataset.schema.columns()) kinds[col.name] = col.kind;
  return kinds;
}

// Script files named directly, or the *.ahk files directly inside a
// directory, sorted by path.
std::vector<fs::path> collect_scripts(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".ahk") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw Error(ErrorCode::kIo, "no such script or directory: " + in);
    }
  }
  return files;
}

std::vector<ingest::MacroScript> read_scripts(const std::vector<fs::path>& files) {
  std::vector<ingest::MacroScript> scripts;
  for (const auto& f : files) scripts.push_back(ingest::read_macro_script(f.string()));
  return scripts;
}

fs::path image_path(const Context& ctx, const std::string& arg) {
  const fs::path p(arg);
  if (p.extension() == ".twimg" || arg.find('/') != std::string::npos) return p;
  return ctx.dir("images") / (arg + ".twimg");
}

// A sandbox directory, or an image file whose manifest stands in for one.
twin::TwinState load_twin_state(const Context& ctx, const std::string& arg) {
  if (fs::is_directory(arg)) return twin::open_twin(arg, ctx.config.screen);
  twin::TwinState state;
  state.manifest = twin::load_image(image_path(ctx, arg)).manifest;
  state.screen = ctx.config.screen;
  return state;
}

twin::Manifest load_manifest(const std::string& arg) {
  if (fs::is_directory(arg)) return twin::scan_sandbox(arg);
  try {
    const json doc = json::parse(text::read_file(arg));
    return twin::manifest_from_json(doc.is_object() && doc.contains("manifest")
                                        ? doc.at("manifest")
                                        : doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedArchive, arg + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(text::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfigParse, path + ": invalid JSON");
  }
}

// --- subcommands -----------------------------------------------------------

struct CaptureArgs {
  std::string root, name, tar;
  std::vector<std::string> exclude;
};

int do_capture(Context& ctx, const CaptureArgs& a) {
  const auto& exclusions = a.exclude.empty() ? ctx.config.exclusions : a.exclude;
  const twin::TwinImage image = twin::capture_image(a.root, exclusions);
  twin::save_image(image, ctx.dir("images"), a.name);
  if (!a.tar.empty()) twin::export_tar_gz(image, a.tar);
  ctx.info() << "captured " << image.manifest.size() << " entries -> "
             << (ctx.dir("images") / (a.name + ".twimg")).string() << "\n";
  return kExitOk;
}

struct TwinArgs {
  std::string image, sandbox, patch, pre, post, checks, twin;
  std::vector<std::string> scripts;
};

int do_twin_create(Context& ctx, const TwinArgs& a) {
  const twin::TwinImage image = twin::load_image(image_path(ctx, a.image));
  const twin::TwinState state = twin::instantiate_twin(image, a.sandbox, ctx.config.screen);
  ctx.info() << "instantiated " << state.manifest.size() << " entries in " << a.sandbox
             << "\n";
  return kExitOk;
}

int do_twin_patch(Context& ctx, const TwinArgs& a) {
  const twin::PatchDelta delta = twin::patch_from_json(read_json_file(a.patch));
  twin::TwinState state = twin::open_twin(a.sandbox, ctx.config.screen);
  const twin::Manifest pre = state.manifest;
  const twin::PatchReport report = twin::apply_patch(state, delta);
  ctx.info() << "applied " << report.applied << " op(s)\n";
  ctx.out << twin::diff_to_json(twin::diff_states(pre, report.manifest)).dump(2) << "\n";
  return kExitOk;
}

int do_twin_diff(Context& ctx, const TwinArgs& a) {
  const twin::TwinDiff diff = twin::diff_states(load_manifest(a.pre), load_manifest(a.post));
  ctx.out << twin::diff_to_json(diff).dump(2) << "\n";
  return kExitOk;
}

int do_twin_check(Context& ctx, const TwinArgs& a) {
  const twin::CheckSpec spec = twin::checks_from_json(read_json_file(a.checks));
  const twin::TwinState state = twin::open_twin(a.sandbox, ctx.config.screen);
  bool all = true;
  for (const auto& r : twin::run_checks(state, spec)) {
    all = all && r.passed;
    ctx.out << (r.passed ? "PASS " : "FAIL ") << r.description;
    if (!r.passed && !r.detail.empty()) ctx.out << ": " << r.detail;
    ctx.out << "\n";
  }
  return all ? kExitOk : kExitFailed;
}

int do_twin_run(Context& ctx, const TwinArgs& a) {
  const twin::TwinState state = load_twin_state(ctx, a.twin);
  twin::EventLog log;
  bool all = true;
  for (const auto& script : read_scripts(collect_scripts(a.scripts))) {
    const auto outcome = twin::run_scenario(state, script, log);
    all = all && outcome.ok;
  }
  for (const auto& e : log.events) {
    ctx.out << e.event.at_ms << "ms " << e.scenario << "#" << e.event.command << " "
            << (e.event.ok ? "ok   " : "FAIL ") << e.event.line;
    if (!e.event.message.empty()) ctx.out << "  (" << e.event.message << ")";
    ctx.out << "\n";
  }
  return all ? kExitOk : kExitFailed;
}

struct IngestArgs {
  std::string in, name;
  std::vector<std::string> macros;
};

int do_ingest_top(Context& ctx, const IngestArgs& a) {
  const auto dataset = ingest::parse_top_capture(text::read_file(a.in));
  const std::string name = a.name.empty() ? fs::path(a.in).stem().string() : a.name;
  const fs::path out = ctx.dir("datasets") / (name + ".csv");
  ingest::write_dataset_csv(dataset, out.string());
  ctx.info() << "ingested " << dataset.rows.size() << " rows -> " << out.string() << "\n";
  return kExitOk;
}

int do_ingest_macro(Context& ctx, const IngestArgs& a) {
  const auto files = collect_scripts(a.macros);
  const auto scripts = read_scripts(files);
  for (const auto& s : scripts) {
    const fs::path out = ctx.dir("scripts") / (s.name + ".ahk");
    text::write_file(out.string(), ingest::emit_macro_script(s));
  }
  ctx.info() << "ingested " << scripts.size() << " script(s) -> "
             << ctx.dir("scripts").string() << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string data, out;
  std::vector<std::string> scripts;
};

int do_train_tabular(Context& ctx, const TrainArgs& a) {
  const auto dataset = read_table(a.data);
  const auto model = tabular::train_gan(
      dataset, ctx.config.gan, stage_seed(ctx.config.seed, Stage::kTrainTabular));
  const fs::path out = a.out.empty() ? ctx.dir("models") / "tabular.json" : fs::path(a.out);
  tabular::save_model(model, out.string());
  ctx.info() << "trained on " << dataset.rows.size() << " rows for " << ctx.config.gan.epochs
             << " epochs -> " << out.string() << "\n";
  return kExitOk;
}

int do_train_seq(Context& ctx, const TrainArgs& a) {
  const std::vector<std::string> inputs =
      a.scripts.empty() ? std::vector<std::string>{ctx.dir("scripts").string()} : a.scripts;
  std::vector<seq::Tokens> corpus;
  for (const auto& s : read_scripts(collect_scripts(inputs))) {
    corpus.push_back(ingest::tokenize_script(s));
  }
  const auto model = seq::train_ngram(corpus, ctx.config.ngram.order, ctx.config.ngram.delta,
                                      stage_seed(ctx.config.seed, Stage::kTrainSeq));
  const fs::path out = a.out.empty() ? ctx.dir("models") / "seq.json" : fs::path(a.out);
  seq::save_ngram(model, out.string());
  ctx.info() << "trained on " << corpus.size() << " script(s), vocabulary "
             << model.vocabulary().size() << " -> " << out.string() << "\n";
  return kExitOk;
}

struct GenArgs {
  std::size_t n = 0;
  std::string model, real, out;
  std::vector<std::string> prompts;
  std::optional<double> temperature;
  std::optional<std::size_t> max_len;
  bool service = false;
};

int do_gen_tabular(Context& ctx, const GenArgs& a) {
  const auto model = tabular::load_model(a.model);
  const auto real = read_table(a.real);
  Rng rng(stage_seed(ctx.config.seed, Stage::kGenTabular));
  tabular::GatedSample sample;
  try {
    sample = tabular::generate_gated(model, real, a.n, ctx.config.gate, rng);
  } catch (const tabular::GateExhausted& e) {
    ctx.err << "gate exhausted after " << e.attempts() << " attempt(s); worst column '"
            << e.column() << "' at distance " << text::format_double(e.distance()) << "\n";
    return kExitFailed;
  }
  if (a.out.empty()) {
    ctx.out << ingest::format_dataset_csv(sample.dataset);
    ctx.err << "gate attempts: " << sample.attempts << "\n";
    return kExitOk;
  }
  ingest::write_dataset_csv(sample.dataset, a.out);
  text::write_file(a.out + kGateSuffix, json{{"attempts", sample.attempts}}.dump() + "\n");
  ctx.out << "gate attempts: " << sample.attempts << "\n";
  ctx.info() << "wrote " << sample.dataset.rows.size() << " rows -> " << a.out << "\n";
  return kExitOk;
}

seq::Tokens prompt_tokens(const std::string& prompt) {
  seq::Tokens tokens{std::string(ingest::kBos)};
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(prompt)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    tokens.push_back(ingest::emit_macro_command(ingest::parse_macro_command(line, line_no)));
  }
  if (tokens.size() == 1) throw Error(ErrorCode::kInvalidArgument, "empty prompt");
  return tokens;
}

int do_gen_seq(Context& ctx, const GenArgs& a) {
  std::optional<seq::NgramModel> model;
  if (a.service) {
    if (!ctx.config.lm_endpoint) {
      throw Error(ErrorCode::kConfigParse, "lm_endpoint: required for --service");
    }
  } else {
    const fs::path path =
        a.model.empty() ? ctx.dir("models") / "seq.json" : fs::path(a.model);
    model = seq::load_ngram(path.string());
  }
  const fs::path out_dir = a.out.empty() ? ctx.dir("scripts") / "generated" : fs::path(a.out);
  const std::uint64_t base = stage_seed(ctx.config.seed, Stage::kGenSeq);
  // Generate everything before writing anything.
  std::vector<ingest::MacroScript> scripts;
  for (std::size_t i = 0; i < a.prompts.size(); ++i) {
    seq::GenRequest req;
    req.prompt = prompt_tokens(a.prompts[i]);
    req.temperature = a.temperature.value_or(ctx.config.ngram.temperature);
    req.max_len = a.max_len.value_or(ctx.config.ngram.max_len);
    req.seed = mix_seed(base, i);
    req.validate();
    const seq::Tokens tokens = a.service
                                   ? seq::generate_via_service(*ctx.config.lm_endpoint, req)
                                   : seq::generate_sequence(*model, req);
    scripts.push_back(seq::sequence_to_script(tokens, "gen-" + std::to_string(i + 1)));
  }
  for (const auto& s : scripts) {
    const fs::path path = out_dir / (s.name + ".ahk");
    text::write_file(path.string(), ingest::emit_macro_script(s));
    ctx.out << path.string() << "\n";
  }
  return kExitOk;
}

struct ValidateArgs {
  std::string real, synth, twin, out;
  std::vector<std::string> scripts, corpus;
};

validate::ScriptMetrics score_script(const ingest::MacroScript& script,
                                     const std::vector<ingest::MacroScript>& corpus,
                                     const twin::TwinState& state) {
  validate::ScriptMetrics m;
  m.name = script.name;
  m.prompt = ingest::emit_macro_command(script.commands.front());
  // References: corpus scripts opening with the same command, or the whole
  // corpus when none does.
  std::vector<const ingest::MacroScript*> refs;
  for (const auto& c : corpus) {
    if (ingest::emit_macro_command(c.commands.front()) == m.prompt) refs.push_back(&c);
  }
  if (refs.empty()) {
    for (const auto& c : corpus) refs.push_back(&c);
  }
  auto lines = [](const ingest::MacroScript& s) {
    std::vector<std::string> out;
    for (const auto& c : s.commands) out.push_back(ingest::emit_macro_command(c));
    return out;
  };
  std::vector<std::vector<std::string>> ref_lines;
  for (const auto* r : refs) {
    m.cosine = std::max(m.cosine, validate::cosine_similarity(script, *r));
    ref_lines.push_back(lines(*r));
  }
  m.bleu = validate::bleu(lines(script), ref_lines);
  const auto replay = validate::replay_validate(script, state);
  m.replay_ok = replay.ok;
  if (replay.first_failure) m.first_failure = replay.first_failure->label();
  m.events = replay.events;
  return m;
}

int do_validate(Context& ctx, const ValidateArgs& a) {
  const auto real = read_table(a.real);
  const auto kinds = kinds_of(real);
  const auto synth = read_table(a.synth, &kinds);

  validate::ReportInputs in;
  in.config = config_to_json(ctx.config);
  in.seeds = {ctx.config.seed, stage_seed(ctx.config.seed, Stage::kTrainTabular),
              stage_seed(ctx.config.seed, Stage::kTrainSeq)};
  in.real = &real;
  in.synth = &synth;
  in.gate = ctx.config.gate;
  const fs::path gate_file = a.synth + kGateSuffix;
  if (fs::exists(gate_file)) {
    in.gate_attempts = read_json_file(gate_file.string()).at("attempts").get<int>();
  }

  if (!a.scripts.empty()) {
    if (a.twin.empty()) throw Error(ErrorCode::kInvalidArgument, "--twin is required with --scripts");
    const auto corpus_inputs = a.corpus.empty()
                                   ? std::vector<std::string>{ctx.dir("scripts").string()}
                                   : a.corpus;
    const auto corpus = read_scripts(collect_scripts(corpus_inputs));
    if (corpus.empty()) throw Error(ErrorCode::kNoReferences, "reference corpus is empty");
    const twin::TwinState state = load_twin_state(ctx, a.twin);
    for (const auto& s : read_scripts(collect_scripts(a.scripts))) {
      in.scripts.push_back(score_script(s, corpus, state));
    }
  }

  const validate::ComparisonReport report = validate::build_report(in);
  const fs::path out =
      a.out.empty() ? validate::report_path(ctx.dir("reports"), report.run_id) : fs::path(a.out);
  validate::save_report(report, out);
  ctx.out << out.string() << "\n";
  ctx.info() << validate::render_report(report);
  if (!report.gate_verified) {
    ctx.err << "post-hoc gate check failed\n";
    return kExitFailed;
  }
  return kExitOk;
}

struct ReportArgs {
  std::string target;
  bool raw = false;
};

int do_report(Context& ctx, const ReportArgs& a) {
  fs::path path(a.target);
  if (!fs::exists(path)) path = validate::report_path(ctx.dir("reports"), a.target);
  const auto report = validate::load_report(path);
  ctx.out << (a.raw ? validate::serialize_report(report) : validate::render_report(report));
  return kExitOk;
}

PipelineConfig resolve_config(const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  const char* env = std::getenv("TWINFORGE_WORKSPACE");
  return default_config(env != nullptr && *env != '\0' ? env : ".");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digital-twin test pipeline: capture, synthesize, validate", "twinforge"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "Pipeline config (JSON)");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_flag("--quiet", quiet, "Only print results");

  std::function<int(Context&)> action;

  CaptureArgs cap;
  auto* capture = app.add_subcommand("capture", "Capture a directory tree as a twin image");
  capture->add_option("--root", cap.root, "Tree to capture")->required();
  capture->add_option("--name", cap.name, "Image name")->required();
  capture->add_option("--exclude", cap.exclude, "Exclusion glob (repeatable)");
  capture->add_option("--tar", cap.tar, "Also export a .tar.gz");
  capture->callback([&] { action = [&](Context& c) { return do_capture(c, cap); }; });

  TwinArgs tw;
  auto* twin_cmd = app.add_subcommand("twin", "Instantiate, patch, diff and check twins");
  twin_cmd->require_subcommand(1);
  auto* t_create = twin_cmd->add_subcommand("create", "Restore an image into a sandbox");
  t_create->add_option("--image", tw.image, "Image path or name")->required();
  t_create->add_option("--sandbox", tw.sandbox, "Empty or absent directory")->required();
  t_create->callback([&] { action = [&](Context& c) { return do_twin_create(c, tw); }; });
  auto* t_patch = twin_cmd->add_subcommand("patch", "Apply a patch atomically");
  t_patch->add_option("--sandbox", tw.sandbox)->required();
  t_patch->add_option("--patch", tw.patch, "Patch JSON")->required();
  t_patch->callback([&] { action = [&](Context& c) { return do_twin_patch(c, tw); }; });
  auto* t_diff = twin_cmd->add_subcommand("diff", "Diff two manifests or sandboxes");
  t_diff->add_option("--pre", tw.pre)->required();
  t_diff->add_option("--post", tw.post)->required();
  t_diff->callback([&] { action = [&](Context& c) { return do_twin_diff(c, tw); }; });
  auto* t_check = twin_cmd->add_subcommand("check", "Run post-patch assertions");
  t_check->add_option("--sandbox", tw.sandbox)->required();
  t_check->add_option("--checks", tw.checks, "Checks JSON")->required();
  t_check->callback([&] { action = [&](Context& c) { return do_twin_check(c, tw); }; });
  auto* t_run = twin_cmd->add_subcommand("run", "Replay scenarios against a twin");
  t_run->add_option("--twin", tw.twin, "Sandbox directory or image")->required();
  t_run->add_option("--script", tw.scripts, "Script file or directory")->required();
  t_run->callback([&] { action = [&](Context& c) { return do_twin_run(c, tw); }; });

  IngestArgs ing;
  auto* ingest_cmd = app.add_subcommand("ingest", "Import recorded data");
  ingest_cmd->require_subcommand(1);
  auto* i_top = ingest_cmd->add_subcommand("top", "Process capture -> dataset CSV");
  i_top->add_option("--in", ing.in, "Capture text")->required();
  i_top->add_option("--name", ing.name, "Dataset name");
  i_top->callback([&] { action = [&](Context& c) { return do_ingest_top(c, ing); }; });
  auto* i_macro = ingest_cmd->add_subcommand("macro", "Macro scripts -> workspace scripts");
  i_macro->add_option("--in", ing.macros, "Script file or directory")->required();
  i_macro->callback([&] { action = [&](Context& c) { return do_ingest_macro(c, ing); }; });

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a generator");
  train_cmd->require_subcommand(1);
  auto* tr_tab = train_cmd->add_subcommand("tabular", "Conditional GAN on a dataset");
  tr_tab->add_option("--data", tr.data, "Dataset CSV")->required();
  tr_tab->add_option("--out", tr.out, "Model path");
  tr_tab->callback([&] { action = [&](Context& c) { return do_train_tabular(c, tr); }; });
  auto* tr_seq = train_cmd->add_subcommand("seq", "N-gram model on macro scripts");
  tr_seq->add_option("--scripts", tr.scripts, "Script file or directory");
  tr_seq->add_option("--out", tr.out, "Model path");
  tr_seq->callback([&] { action = [&](Context& c) { return do_train_seq(c, tr); }; });

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic data");
  gen_cmd->require_subcommand(1);
  auto* g_tab = gen_cmd->add_subcommand("tabular", "Gated synthetic rows");
  g_tab->add_option("--n", gen.n, "Rows")->required()->check(CLI::PositiveNumber);
  g_tab->add_option("--model", gen.model)->required();
  g_tab->add_option("--real", gen.real, "Recorded dataset CSV")->required();
  g_tab->add_option("--out", gen.out, "Output CSV (default: stdout)");
  g_tab->callback([&] { action = [&](Context& c) { return do_gen_tabular(c, gen); }; });
  auto* g_seq = gen_cmd->add_subcommand("seq", "Macro scripts from prompts");
  g_seq->add_option("--model", gen.model, "N-gram model (default: models/seq.json)");
  g_seq->add_option("--prompt", gen.prompts, "Opening command(s), one script each")
      ->required();
  g_seq->add_option("--temperature", gen.temperature)->check(CLI::NonNegativeNumber);
  g_seq->add_option("--max-len", gen.max_len)->check(CLI::PositiveNumber);
  g_seq->add_option("--out", gen.out, "Output directory");
  g_seq->add_flag("--service", gen.service, "Use the configured lm_endpoint");
  g_seq->callback([&] { action = [&](Context& c) { return do_gen_seq(c, gen); }; });

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Compare synthetic with recorded data");
  val_cmd->add_option("--real", val.real)->required();
  val_cmd->add_option("--synth", val.synth)->required();
  val_cmd->add_option("--scripts", val.scripts, "Generated scripts");
  val_cmd->add_option("--corpus", val.corpus, "Reference scripts");
  val_cmd->add_option("--twin", val.twin, "Sandbox directory or image for replay");
  val_cmd->add_option("--out", val.out, "Report path");
  val_cmd->callback([&] { action = [&](Context& c) { return do_validate(c, val); }; });

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Show a comparison report");
  rep_cmd->add_option("report", rep.target, "Report file or run id")->required();
  rep_cmd->add_flag("--json", rep.raw, "Print the stored JSON");
  rep_cmd->callback([&] { action = [&](Context& c) { return do_report(c, rep); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    Context ctx{resolve_config(config_path), out, err, quiet};
    if (seed) ctx.config.seed = *seed;
    for (const char* sub : {"images", "datasets", "models", "scripts", "reports"}) {
      fs::create_directories(ctx.dir(sub));
    }
    WorkspaceLock lock(ctx.config.workspace_root);
    return action(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace twinforge::cli
