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

#include <string>
#include <string_view>

#include "json.hpp"

#include "twinforge/seq/ngram.hpp"

namespace twinforge::seq {

// External text-generation backend. Plain http:// only.
struct EndpointConfig {
  std::string url;         // e.g. http://127.0.0.1:8080/generate
  std::string auth_token;  // sent as "Authorization: Bearer <token>" if set
  int timeout_ms = 10000;

  bool operator==(const EndpointConfig&) const = default;
};

// {"prompt": [...], "max_tokens": n, "temperature": t}
nlohmann::json make_service_request(const GenRequest& request);

// Expects {"tokens": [string, ...]}; anything else is ServiceBadResponse.
Tokens parse_service_response(std::string_view body);

// One POST per call. Throws ServiceUnreachable, Timeout or
// ServiceBadResponse. The returned tokens still have to go through
// sequence_to_script before use.
Tokens generate_via_service(const EndpointConfig& endpoint,
                            const GenRequest& request);

}  // namespace twinforge::seq
