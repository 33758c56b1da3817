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

// Vocabulary shared by every module: focus conditions, sentence types,
// IS-types and their canonical string labels.

#ifndef FOKUSZ_TYPES_HPP_
#define FOKUSZ_TYPES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace fokusz {

enum class FocusCondition { kObjectFocus, kSubjectFocus };

inline constexpr std::array<FocusCondition, 2> kAllConditions = {
    FocusCondition::kObjectFocus, FocusCondition::kSubjectFocus};

enum class SourceKind { kHuman, kVlm };

enum class Role { kS, kO, kV, kI };

enum class SentenceType { kSVIO, kOSVI, kOIVS, kSIVO, kSOVI, kOVIS, kSOIV, kOtherOrder };

inline constexpr std::array<SentenceType, 8> kAllSentenceTypes = {
    SentenceType::kSVIO, SentenceType::kOSVI, SentenceType::kOIVS,
    SentenceType::kSIVO, SentenceType::kSOVI, SentenceType::kOVIS,
    SentenceType::kSOIV, SentenceType::kOtherOrder};

enum class ISType { kDefault, kPreVF, kTopPreVF, kTopPostVF, kError };

// Fixed category order used for tables, strategy vectors and profiles.
inline constexpr std::array<ISType, 5> kAllIsTypes = {
    ISType::kDefault, ISType::kPreVF, ISType::kTopPreVF, ISType::kTopPostVF,
    ISType::kError};
inline constexpr std::size_t kNumIsTypes = kAllIsTypes.size();

constexpr std::size_t index_of(ISType t) { return static_cast<std::size_t>(t); }
constexpr std::size_t index_of(FocusCondition c) { return static_cast<std::size_t>(c); }

enum class Definiteness { kDefinite, kIndefinite, kUnknown };

enum class ExclusionReason { kParseFailure, kMissingRoles, kOther };

// Labels as they appear in files ("OBJ_FOC", "Top-preVF", "SVIO", ...).
std::string_view label(FocusCondition c);
std::string_view label(SourceKind k);
std::string_view label(Role r);
std::string_view label(SentenceType t);
std::string_view label(ISType t);
std::string_view label(Definiteness d);
std::string_view label(ExclusionReason r);

std::optional<FocusCondition> parse_condition(std::string_view s);
std::optional<SourceKind> parse_source_kind(std::string_view s);
std::optional<SentenceType> parse_sentence_type(std::string_view s);
std::optional<ISType> parse_is_type(std::string_view s);
std::optional<Definiteness> parse_definiteness(std::string_view s);
std::optional<ExclusionReason> parse_exclusion_reason(std::string_view s);

// Marker written in place of a sentence type or IS-type for excluded responses.
inline constexpr std::string_view kNonCategorisableLabel = "non-categorisable";

constexpr bool has_preverbal_focus(ISType t) {
  return t == ISType::kPreVF || t == ISType::kTopPreVF;
}

constexpr bool is_topicalised(ISType t) {
  return t == ISType::kTopPreVF || t == ISType::kTopPostVF;
}

}  // namespace fokusz

#endif  // FOKUSZ_TYPES_HPP_
