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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "doctest.h"
#include "error_check.hpp"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"

#include "twinforge/ingest/macro.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/seq/ngram.hpp"
#include "twinforge/seq/service_client.hpp"

using namespace twinforge;
using namespace twinforge::seq;

namespace {

std::vector<Tokens> fixture_corpus() {
  std::vector<Tokens> corpus;
  for (const auto& s : testing::fixture_scripts()) corpus.push_back(ingest::tokenize_script(s));
  return corpus;
}

GenRequest request(Tokens prompt, double t, std::uint64_t seed = 0) {
  GenRequest r;
  r.prompt = std::move(prompt);
  r.temperature = t;
  r.seed = seed;
  return r;
}

// Local HTTP server on an ephemeral port, running on its own thread.
class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> h) {
    server_.Post("/generate", std::move(h));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/generate"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("vocabulary is the corpus tokens plus sentinels") {
  const auto corpus = fixture_corpus();
  REQUIRE(corpus.size() == 6);
  std::set<std::string> expected;
  for (const auto& seq : corpus) expected.insert(seq.begin(), seq.end());
  const auto model = train_ngram(corpus);
  CHECK(std::set<std::string>(model.vocabulary().begin(), model.vocabulary().end()) == expected);
  CHECK(expected.count("<s>") == 1);
  CHECK(expected.count("</s>") == 1);
  CHECK(std::is_sorted(model.vocabulary().begin(), model.vocabulary().end()));
  CHECK(std::find(model.outcomes().begin(), model.outcomes().end(), "<s>") ==
        model.outcomes().end());
}

TEST_CASE("training errors") {
  CHECK_ERROR_CODE(train_ngram({}), ErrorCode::kEmptyCorpus);
  CHECK_THROWS(train_ngram({{"Run, a.exe"}}));
  CHECK_THROWS(train_ngram(fixture_corpus(), 0));
}

TEST_CASE("next-token distributions are positive and normalised") {
  const auto corpus = fixture_corpus();
  Rng rng(3);
  for (int order = 1; order <= 4; ++order) {
    const auto model = train_ngram(corpus, order);
    const auto& vocab = model.vocabulary();
    for (int trial = 0; trial < 100; ++trial) {
      Tokens history{"<s>"};
      const auto len = rng.below(6);
      for (std::uint64_t i = 0; i < len; ++i) {
        history.push_back(rng.below(5) == 0 ? "Send, unseen" : vocab[rng.below(vocab.size())]);
      }
      const auto p = model.next_distribution(history);
      REQUIRE(p.size() == model.outcomes().size());
      for (double x : p) CHECK(x > 0.0);
      CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("a single training sequence is the most likely one of its length") {
  const auto script = testing::fixture_scripts().front();
  const Tokens seq = ingest::tokenize_script(script);
  const auto model = train_ngram({seq}, 3);
  const double best = model.sequence_log_prob(seq);
  Rng rng(4);
  const auto& outcomes = model.outcomes();
  for (int trial = 0; trial < 300; ++trial) {
    Tokens alt = seq;
    const std::size_t i = 1 + rng.below(alt.size() - 1);
    alt[i] = outcomes[rng.below(outcomes.size())];
    if (alt == seq) continue;
    CHECK(model.sequence_log_prob(alt) < best);
  }
}

TEST_CASE("greedy generation reproduces a single-script corpus") {
  for (const auto& script : testing::fixture_scripts()) {
    const Tokens seq = ingest::tokenize_script(script);
    const auto model = train_ngram({seq}, 3);
    const auto out = generate_sequence(model, request({seq[0], seq[1]}, 0.0));
    CHECK(out == seq);
  }
}

TEST_CASE("greedy generation is a pure function") {
  const auto model = train_ngram(fixture_corpus());
  const auto a = generate_sequence(model, request({"<s>", "Run, notepad.exe"}, 0.0, 1));
  const auto b = generate_sequence(model, request({"<s>", "Run, notepad.exe"}, 0.0, 2));
  CHECK(a == b);
}

TEST_CASE("sampling is seeded and respects max_len") {
  const auto model = train_ngram(fixture_corpus());
  const auto a = generate_sequence(model, request({"<s>", "Run, chrome.exe"}, 0.8, 5));
  const auto b = generate_sequence(model, request({"<s>", "Run, chrome.exe"}, 0.8, 5));
  CHECK(a == b);
  CHECK(a.front() == "<s>");
  CHECK(a[1] == "Run, chrome.exe");
  auto short_req = request({"<s>", "Run, chrome.exe"}, 0.8, 5);
  short_req.max_len = 4;
  CHECK(generate_sequence(model, short_req).size() <= 4);
}

TEST_CASE("sampled scripts from the fixture corpus parse") {
  const auto model = train_ngram(fixture_corpus());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto tokens = generate_sequence(model, request({"<s>", "Run, chrome.exe"}, 0.8, seed));
    const auto script = sequence_to_script(tokens, "g");
    CHECK(script.commands.front() == ingest::MacroCommand{ingest::Verb::kRun, {"chrome.exe"}});
  }
}

TEST_CASE("unseen prompt tokens back off instead of failing") {
  const auto model = train_ngram(fixture_corpus());
  const auto out = generate_sequence(model, request({"<s>", "Run, unknown.exe"}, 0.0));
  CHECK(out.size() > 2);
}

TEST_CASE("sequence to script") {
  const auto script = testing::fixture_scripts()[2];
  CHECK(sequence_to_script(ingest::tokenize_script(script), script.name) == script);
  try {
    sequence_to_script(Tokens{"<s>", "Run, a.exe", "Teleport, x", "</s>"}, "x");
    FAIL("expected UnknownVerb");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownVerb);
    CHECK(e.position() == 2u);
  }
  CHECK_ERROR_CODE(sequence_to_script(Tokens{"<s>", "</s>"}, "x"), ErrorCode::kEmptyScript);
}

TEST_CASE("generation request validation") {
  const auto model = train_ngram(fixture_corpus());
  CHECK_ERROR_CODE(generate_sequence(model, request({}, 0.0)), ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(generate_sequence(model, request({"<s>"}, -1.0)), ErrorCode::kInvalidArgument);
  auto r = request({"<s>"}, 0.0);
  r.max_len = 0;
  CHECK_ERROR_CODE(generate_sequence(model, r), ErrorCode::kInvalidArgument);
}

TEST_CASE("model JSON round trip") {
  testing::TempDir dir;
  const auto model = train_ngram(fixture_corpus(), 2, 0.05, 77);
  save_ngram(model, (dir / "s.json").string());
  const auto back = load_ngram((dir / "s.json").string());
  CHECK(back == model);
  CHECK(back.order() == 2);
  CHECK(back.delta() == 0.05);
  auto doc = model.to_json();
  doc["format_version"] = 9;
  CHECK_ERROR_CODE(NgramModel::from_json(doc), ErrorCode::kMalformedModel);
}

// ---------------------------------------------------------------- service

TEST_CASE("service request and response shapes") {
  const auto req = make_service_request(request({"<s>", "Run, a.exe"}, 0.5));
  CHECK(req.at("prompt") == nlohmann::json::array({"<s>", "Run, a.exe"}));
  CHECK(req.at("max_tokens") == 200);
  CHECK(req.at("temperature") == 0.5);
  CHECK(parse_service_response(R"({"tokens": ["a", "b"]})") == Tokens{"a", "b"});
  CHECK_ERROR_CODE(parse_service_response(R"({"tokens": 5})"), ErrorCode::kServiceBadResponse);
  CHECK_ERROR_CODE(parse_service_response(R"({"tokens": [1]})"), ErrorCode::kServiceBadResponse);
  CHECK_ERROR_CODE(parse_service_response("nope"), ErrorCode::kServiceBadResponse);
}

TEST_CASE("stub service echoes a script") {
  const auto script = testing::fixture_scripts().front();
  const Tokens tokens = ingest::tokenize_script(script);
  std::string seen_auth;
  nlohmann::json seen_body;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = nlohmann::json::parse(req.body);
    res.set_content(nlohmann::json{{"tokens", tokens}}.dump(), "application/json");
  });
  EndpointConfig ep{server.url(), "secret", 5000};
  const auto out = generate_via_service(ep, request({"<s>", tokens[1]}, 0.8));
  CHECK(out == tokens);
  CHECK(seen_auth == "Bearer secret");
  CHECK(seen_body.at("prompt").size() == 2);
  CHECK(sequence_to_script(out, script.name) == script);
}

TEST_CASE("service schema violations and HTTP errors") {
  StubServer bad([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"tokens": 5})", "application/json");
  });
  CHECK_ERROR_CODE(generate_via_service({bad.url(), "", 5000}, request({"<s>"}, 0.0)),
                   ErrorCode::kServiceBadResponse);
  StubServer failing([](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  CHECK_ERROR_CODE(generate_via_service({failing.url(), "", 5000}, request({"<s>"}, 0.0)),
                   ErrorCode::kServiceBadResponse);
}

TEST_CASE("unreachable service") {
  // Bound but never listening: connections to it are refused.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  const EndpointConfig ep{"http://127.0.0.1:" + std::to_string(port) + "/generate", "", 2000};
  const auto start = std::chrono::steady_clock::now();
  CHECK_ERROR_CODE(generate_via_service(ep, request({"<s>"}, 0.0)),
                   ErrorCode::kServiceUnreachable);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::milliseconds(2500));
  ::close(fd);
}

TEST_CASE("slow service times out") {
  StubServer slow([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"tokens": []})", "application/json");
  });
  CHECK_ERROR_CODE(generate_via_service({slow.url(), "", 200}, request({"<s>"}, 0.0)),
                   ErrorCode::kTimeout);
}

TEST_CASE("endpoint URL checks") {
  CHECK_ERROR_CODE(generate_via_service({"https://x/y", "", 100}, request({"<s>"}, 0.0)),
                   ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(generate_via_service({"http://", "", 100}, request({"<s>"}, 0.0)),
                   ErrorCode::kInvalidArgument);
}
