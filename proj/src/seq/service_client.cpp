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

#include "twinforge/seq/service_client.hpp"

#include <chrono>

#include "httplib.h"

#include "twinforge/error.hpp"

namespace twinforge::seq {

nlohmann::json make_service_request(const GenRequest& request) {
  return {{"prompt", request.prompt},
          {"max_tokens", request.max_len},
          {"temperature", request.temperature}};
}

Tokens parse_service_response(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kServiceBadResponse, std::string("not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_array()) {
    throw Error(ErrorCode::kServiceBadResponse, "missing \"tokens\" array");
  }
  Tokens out;
  for (std::size_t i = 0; i < doc["tokens"].size(); ++i) {
    const auto& t = doc["tokens"][i];
    if (!t.is_string()) {
      throw Error(ErrorCode::kServiceBadResponse, "token is not a string", i);
    }
    out.push_back(t.get<std::string>());
  }
  return out;
}

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (!url.starts_with(kScheme)) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must be an http:// URL: " + url);
  }
  const auto slash = url.find('/', kScheme.size());
  ParsedUrl p;
  p.origin = url.substr(0, slash);
  p.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (p.origin.size() == kScheme.size()) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint has no host: " + url);
  }
  return p;
}

}  // namespace

Tokens generate_via_service(const EndpointConfig& endpoint,
                            const GenRequest& request) {
  request.validate();
  if (endpoint.timeout_ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "timeout must be positive");
  }
  const ParsedUrl url = split_url(endpoint.url);
  httplib::Client client(url.origin);
  const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!endpoint.auth_token.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.auth_token);
  }
  const std::string body = make_service_request(request).dump();
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(url.path, headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const bool timed_out =
        err == httplib::Error::ConnectionTimeout ||
        ((err == httplib::Error::Read || err == httplib::Error::Write) &&
         elapsed >= timeout);
    if (timed_out) {
      throw Error(ErrorCode::kTimeout,
                  "no response within " + std::to_string(endpoint.timeout_ms) +
                      " ms from " + endpoint.url);
    }
    throw Error(ErrorCode::kServiceUnreachable,
                endpoint.url + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kServiceBadResponse,
                "HTTP status " + std::to_string(res->status));
  }
  return parse_service_response(res->body);
}

}  // namespace twinforge::seq
