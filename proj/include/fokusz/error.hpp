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

#ifndef FOKUSZ_ERROR_HPP_
#define FOKUSZ_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fokusz {

enum class ErrorKind {
  kIo,
  kMalformedManifest,
  kDuplicateItem,
  kMalformedRecord,
  kDuplicateTrial,
  kUnknownItem,
  kMalformedLine,
  kOrphanRecord,
  kEmptyProfile,
  kMissingCondition,
  kDegenerateTable,
  kTooFewGroups,
  kAllDifferencesZero,
  kEffectTooSmall,
  kInvalidArgument,
  kKTooLarge,
  kRangeTooSmall,
  kInvalidProfile,
  kAuthMissing,
  kEndpointError,
  kEmptyDataset,
};

std::string_view error_kind_name(ErrorKind kind);

// Every failure the library reports. `line()` is set for errors tied to a
// position in an input file (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace fokusz

#endif  // FOKUSZ_ERROR_HPP_
