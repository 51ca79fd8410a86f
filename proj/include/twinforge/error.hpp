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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twinforge {

// Every failure surfaced by the library carries one of these codes. The CLI
// maps them onto exit codes; tests match on them.
enum class ErrorCode {
  // ingest
  kMalformedTime,
  kMalformedLine,
  kEmptyCapture,
  kRaggedRows,
  kMalformedCsv,
  kUnknownVerb,
  kBadArity,
  kBadArg,
  kEmptyScript,
  kEmptyDataset,
  // tabular
  kTooFewValues,
  kUnknownCategory,
  kTooFewRows,
  kNonFiniteLoss,
  kEmptySample,
  kGateExhausted,
  kInvalidArgument,
  kMalformedModel,
  // seq
  kEmptyCorpus,
  kServiceUnreachable,
  kServiceBadResponse,
  kTimeout,
  // validate
  kEmptyCandidate,
  kNoReferences,
  kMalformedReport,
  // twin
  kSymlinkOutsideRoot,
  kSandboxNotEmpty,
  kHashMismatch,
  kMalformedArchive,
  kInvalidPath,
  kDeleteMissing,
  kReplaceMissing,
  kAddExisting,
  kConfigKeyMissing,
  kLocked,
  // cli / io
  kConfigParse,
  kUnknownKey,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // 1-based line number or 0-based token index, depending on the raiser.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace twinforge
