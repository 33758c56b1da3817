/* Copyright 2026 The fokusz Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fokusz/error.hpp"

namespace fokusz {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kMalformedManifest: return "MalformedManifest";
    case ErrorKind::kDuplicateItem: return "DuplicateItem";
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kDuplicateTrial: return "DuplicateTrial";
    case ErrorKind::kUnknownItem: return "UnknownItem";
    case ErrorKind::kMalformedLine: return "MalformedLine";
    case ErrorKind::kOrphanRecord: return "OrphanRecord";
    case ErrorKind::kEmptyProfile: return "EmptyProfile";
    case ErrorKind::kMissingCondition: return "MissingCondition";
    case ErrorKind::kDegenerateTable: return "DegenerateTable";
    case ErrorKind::kTooFewGroups: return "TooFewGroups";
    case ErrorKind::kAllDifferencesZero: return "AllDifferencesZero";
    case ErrorKind::kEffectTooSmall: return "EffectTooSmall";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kKTooLarge: return "KTooLarge";
    case ErrorKind::kRangeTooSmall: return "RangeTooSmall";
    case ErrorKind::kInvalidProfile: return "InvalidProfile";
    case ErrorKind::kAuthMissing: return "AuthMissing";
    case ErrorKind::kEndpointError: return "EndpointError";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(error_kind_name(kind));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(kind, message, line)),
      kind_(kind),
      line_(line) {}

}  // namespace fokusz
