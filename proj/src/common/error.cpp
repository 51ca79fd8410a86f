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

#include "twinforge/error.hpp"

namespace twinforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedTime: return "MalformedTime";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyCapture: return "EmptyCapture";
    case ErrorCode::kRaggedRows: return "RaggedRows";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kUnknownVerb: return "UnknownVerb";
    case ErrorCode::kBadArity: return "BadArity";
    case ErrorCode::kBadArg: return "BadArg";
    case ErrorCode::kEmptyScript: return "EmptyScript";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kTooFewValues: return "TooFewValues";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kGateExhausted: return "GateExhausted";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedModel: return "MalformedModel";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kServiceUnreachable: return "ServiceUnreachable";
    case ErrorCode::kServiceBadResponse: return "ServiceBadResponse";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kEmptyCandidate: return "EmptyCandidate";
    case ErrorCode::kNoReferences: return "NoReferences";
    case ErrorCode::kMalformedReport: return "MalformedReport";
    case ErrorCode::kSymlinkOutsideRoot: return "SymlinkOutsideRoot";
    case ErrorCode::kSandboxNotEmpty: return "SandboxNotEmpty";
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kMalformedArchive: return "MalformedArchive";
    case ErrorCode::kInvalidPath: return "InvalidPath";
    case ErrorCode::kDeleteMissing: return "DeleteMissing";
    case ErrorCode::kReplaceMissing: return "ReplaceMissing";
    case ErrorCode::kAddExisting: return "AddExisting";
    case ErrorCode::kConfigKeyMissing: return "ConfigKeyMissing";
    case ErrorCode::kLocked: return "Locked";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> position) {
  std::string out(to_string(code));
  if (position) out += "@" + std::to_string(*position);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> position)
    : std::runtime_error(format_message(code, message, position)),
      code_(code),
      position_(position) {}

}  // namespace twinforge
