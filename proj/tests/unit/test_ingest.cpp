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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "error_check.hpp"
#include "fixtures.hpp"

#include "twinforge/ingest/dataset.hpp"
#include "twinforge/ingest/macro.hpp"
#include "twinforge/ingest/top.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/text.hpp"

using namespace twinforge;
using namespace twinforge::ingest;

TEST_CASE("time lapsed parsing") {
  CHECK(parse_time_lapsed("00:01.1") == 1.1);
  CHECK(parse_time_lapsed("00:00.0") == 0.0);
  CHECK(parse_time_lapsed("01:02.5") == 62.5);
  for (const char* bad : {"1.1", "00:1.1", "00:01", "00:01.12", "aa:01.1", "-1:01.1", ""}) {
    CHECK_ERROR_CODE(parse_time_lapsed(bad), ErrorCode::kMalformedTime);
  }
}

TEST_CASE("time lapsed format/parse round trip on the 0.1 s grid") {
  for (long long tenths = 0; tenths < 60000; tenths += 7) {
    const double t = static_cast<double>(tenths) / 10.0;
    CHECK(parse_time_lapsed(format_time_lapsed(t)) == t);
  }
}

TEST_CASE("top capture rows from the process table") {
  const auto rows = parse_top_samples("392 root 3.3 0.2 00:01.1 gedit");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == ProcessSample{392, "root", 3.3, 0.2, 1.1, "gedit"});
  const auto second = parse_top_samples("1281 root 2 0.1 00:39.5 top");
  CHECK(second[0] == ProcessSample{1281, "root", 2.0, 0.1, 39.5, "top"});
  CHECK_ERROR_CODE(parse_top_samples(""), ErrorCode::kEmptyCapture);
  CHECK_ERROR_CODE(parse_top_samples("  PID USER %CPU\n"), ErrorCode::kEmptyCapture);
}

TEST_CASE("the five-row capture reproduces all thirty cells") {
  const auto samples = parse_top_samples(testing::sample_capture());
  const std::vector<ProcessSample> expected{
      {392, "root", 3.3, 0.2, 1.1, "gedit"},
      {1281, "root", 2.0, 0.1, 39.5, "top"},
      {184, "root", 2.0, 0.1, 9.1, "sh"},
      {421, "root", 1.7, 0.7, 0.7, "xdg-desktop-por"},
      {75, "root", 0.7, 0.4, 0.1, "featherpad"}};
  CHECK(samples == expected);

  const auto ds = parse_top_capture(testing::sample_capture());
  CHECK(ds.schema == process_schema());
  CHECK(ds.row_ids == std::vector<long long>{392, 1281, 184, 421, 75});
  CHECK(ds.rows.size() * (ds.schema.size() + 1) == 30);
}

TEST_CASE("top capture errors carry the line number") {
  try {
    parse_top_samples("PID USER\n392 root 3.3 0.2 00:01.1 gedit\n7 root x 0.1 00:00.1 sh\n");
    FAIL("expected MalformedLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMalformedLine);
    CHECK(e.position() == 3u);
  }
  CHECK_ERROR_CODE(parse_top_samples("1 root 0.1 0.1 00:00.1"), ErrorCode::kMalformedLine);
  CHECK_ERROR_CODE(parse_top_samples("1 root 0.1 101 00:00.1 x"), ErrorCode::kMalformedLine);
  CHECK_ERROR_CODE(parse_top_samples("1 root 0.1 1 0:0.1 x"), ErrorCode::kMalformedLine);
}

TEST_CASE("command keeps embedded spaces") {
  const auto rows = parse_top_samples("9 alice 0.5 0.3 00:02.0 python3 -m http.server");
  CHECK(rows[0].command == "python3 -m http.server");
}

TEST_CASE("schema inference rules") {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 560; ++i) {
    rows.push_back({std::to_string(i * 0.37), "root", std::to_string(i % 3)});
  }
  const auto schema = infer_schema({"cpu", "user", "level"}, rows);
  CHECK(schema[0].kind == ColumnKind::kContinuous);
  CHECK(schema[1].kind == ColumnKind::kDiscrete);
  CHECK(schema[2].kind == ColumnKind::kDiscrete);

  const auto overridden =
      infer_schema({"cpu", "user", "level"}, rows, {{"level", ColumnKind::kContinuous}});
  CHECK(overridden[2].kind == ColumnKind::kContinuous);

  rows.push_back({"1", "root"});
  CHECK_ERROR_CODE(infer_schema({"cpu", "user", "level"}, rows), ErrorCode::kRaggedRows);
}

TEST_CASE("exactly ten distinct numbers stay discrete, eleven become continuous") {
  std::vector<std::vector<std::string>> ten, eleven;
  for (int i = 0; i < 40; ++i) {
    ten.push_back({std::to_string(i % 10)});
    eleven.push_back({std::to_string(i % 11)});
  }
  CHECK(infer_schema({"x"}, ten)[0].kind == ColumnKind::kDiscrete);
  CHECK(infer_schema({"x"}, eleven)[0].kind == ColumnKind::kContinuous);
}

TEST_CASE("schema inference is invariant to row order") {
  Rng rng(11);
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 30; ++i) {
    rows.push_back({std::to_string(rng.below(12)), std::to_string(rng.uniform()),
                    rng.below(2) ? "a" : "b"});
  }
  const auto base = infer_schema({"a", "b", "c"}, rows);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      std::swap(rows[i], rows[rng.below(i + 1)]);
    }
    CHECK(infer_schema({"a", "b", "c"}, rows) == base);
  }
}

TEST_CASE("schema rejects duplicate or missing column names") {
  CHECK_THROWS(Schema(std::vector<Column>{}));
  CHECK_THROWS(Schema({{"a", ColumnKind::kDiscrete}, {"a", ColumnKind::kContinuous}}));
}

TEST_CASE("dataset CSV round trip with quoting") {
  testing::TempDir dir;
  auto ds = parse_top_capture(testing::sample_capture());
  std::get<std::string>(ds.rows[0][4]) = "cool app,v2";
  std::get<std::string>(ds.rows[1][4]) = "say \"hi\"";
  const auto path = (dir / "t.csv").string();
  write_dataset_csv(ds, path);
  const auto back = read_dataset_csv(path, process_kind_overrides());
  CHECK(back == ds);
  CHECK(format_dataset_csv(back) == format_dataset_csv(ds));
}

TEST_CASE("process fixture round-trips through CSV") {
  const auto ds = testing::process_fixture();
  CHECK(ds.rows.size() == 560);
  CHECK(parse_dataset_csv(format_dataset_csv(ds), process_kind_overrides()) == ds);
  // Without overrides the numeric columns are still inferred continuous.
  const auto inferred = parse_dataset_csv(format_dataset_csv(ds));
  CHECK(inferred.schema == ds.schema);
}

TEST_CASE("CSV errors") {
  CHECK_ERROR_CODE(parse_dataset_csv(""), ErrorCode::kMalformedCsv);
  CHECK_ERROR_CODE(parse_dataset_csv("1,2\n3,4\n"), ErrorCode::kMalformedCsv);
  CHECK_ERROR_CODE(parse_dataset_csv("a,a\n1,2\n"), ErrorCode::kMalformedCsv);
  CHECK_ERROR_CODE(parse_dataset_csv("a,b\n1,\"2\n"), ErrorCode::kMalformedCsv);
  CHECK_ERROR_CODE(read_dataset_csv("/nonexistent/file.csv"), ErrorCode::kIo);
}

TEST_CASE("macro script parsing") {
  const auto s = parse_macro_script("Run, chrome.exe\nSleep, 500\nSend, hello{Enter}");
  REQUIRE(s.commands.size() == 3);
  CHECK(s.commands[0] == MacroCommand{Verb::kRun, {"chrome.exe"}});
  CHECK(s.commands[1] == MacroCommand{Verb::kSleep, {"500"}});
  CHECK(s.commands[2] == MacroCommand{Verb::kSend, {"hello{Enter}"}});

  const auto c = parse_macro_script("; comment\n\n  click ,  10 ,20  \n");
  CHECK(c.commands.at(0) == MacroCommand{Verb::kClick, {"10", "20"}});
}

TEST_CASE("macro script errors") {
  CHECK_ERROR_CODE(parse_macro_script("Sleep, -5"), ErrorCode::kBadArg);
  CHECK_ERROR_CODE(parse_macro_script("Teleport, x"), ErrorCode::kUnknownVerb);
  CHECK_ERROR_CODE(parse_macro_script("Click, 1"), ErrorCode::kBadArity);
  CHECK_ERROR_CODE(parse_macro_script("Click, 1, 2, 3"), ErrorCode::kBadArity);
  CHECK_ERROR_CODE(parse_macro_script("Click, 1, y"), ErrorCode::kBadArg);
  CHECK_ERROR_CODE(parse_macro_script("Run,"), ErrorCode::kBadArity);
  CHECK_ERROR_CODE(parse_macro_script("; only a comment\n"), ErrorCode::kEmptyScript);
  try {
    parse_macro_script("Run, a.exe\n\nSleep, x\n");
    FAIL("expected BadArg");
  } catch (const Error& e) {
    CHECK(e.position() == 3u);
  }
}

TEST_CASE("emit is canonical and parse inverts it") {
  const auto s = parse_macro_script("run,chrome.exe\nSLEEP,  0500\nClick,3,4");
  const std::string text = emit_macro_script(s);
  CHECK(text == "Run, chrome.exe\nSleep, 500\nClick, 3, 4\n");
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(parse_macro_script(text) == MacroScript{"", s.commands});
  CHECK_ERROR_CODE(emit_macro_script(MacroScript{}), ErrorCode::kEmptyScript);
}

TEST_CASE("fixture corpus is a fixed point of emit after parse") {
  for (const auto& s : testing::fixture_scripts()) {
    const std::string once = emit_macro_script(s);
    const auto again = parse_macro_script(once, s.name);
    CHECK(again == s);
    CHECK(emit_macro_script(again) == once);
  }
}

TEST_CASE("random valid scripts round-trip") {
  Rng rng(99);
  const std::vector<std::string> words{"chrome.exe", "Notepad", "hello{Enter}", "a, b", "^s"};
  for (int trial = 0; trial < 200; ++trial) {
    MacroScript s;
    const auto n = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto verb = static_cast<Verb>(rng.below(6));
      MacroCommand c{verb, {}};
      if (verb == Verb::kClick) {
        c.args = {std::to_string(rng.below(3000)), std::to_string(rng.below(3000))};
      } else if (verb == Verb::kSleep) {
        c.args = {std::to_string(rng.below(100000))};
      } else {
        c.args = {words[rng.below(words.size())]};
      }
      s.commands.push_back(c);
    }
    CHECK(parse_macro_script(emit_macro_script(s)) == s);
  }
}

TEST_CASE("tokenization") {
  const auto s = parse_macro_script("Sleep, 500\nRun, x.exe");
  const auto tokens = tokenize_script(s);
  CHECK(tokens == std::vector<std::string>{"<s>", "Sleep, 500", "Run, x.exe", "</s>"});
  const auto t = parse_macro_script("sleep,500\nrun,  x.exe", "other");
  CHECK(tokenize_script(t) == tokens);
}
