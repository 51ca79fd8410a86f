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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinforge::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
// Whole-string parse; rejects trailing junk, inf and nan.
std::optional<double> parse_finite(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);

std::string read_file(const std::string& path);
// Writes through a temporary sibling and renames it into place.
void write_file(const std::string& path, std::string_view contents);

}  // namespace twinforge::text
