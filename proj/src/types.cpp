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

#include "fokusz/types.hpp"

#include <algorithm>

namespace fokusz {

std::string_view label(FocusCondition c) {
  return c == FocusCondition::kObjectFocus ? "OBJ_FOC" : "SUBJ_FOC";
}

std::string_view label(SourceKind k) {
  return k == SourceKind::kHuman ? "human" : "vlm";
}

std::string_view label(Role r) {
  switch (r) {
    case Role::kS: return "S";
    case Role::kO: return "O";
    case Role::kV: return "V";
    case Role::kI: return "I";
  }
  return "?";
}

std::string_view label(SentenceType t) {
  switch (t) {
    case SentenceType::kSVIO: return "SVIO";
    case SentenceType::kOSVI: return "OSVI";
    case SentenceType::kOIVS: return "OIVS";
    case SentenceType::kSIVO: return "SIVO";
    case SentenceType::kSOVI: return "SOVI";
    case SentenceType::kOVIS: return "OVIS";
    case SentenceType::kSOIV: return "SOIV";
    case SentenceType::kOtherOrder: return "other";
  }
  return "?";
}

std::string_view label(ISType t) {
  switch (t) {
    case ISType::kDefault: return "default";
    case ISType::kPreVF: return "preVF";
    case ISType::kTopPreVF: return "Top-preVF";
    case ISType::kTopPostVF: return "Top-postVF";
    case ISType::kError: return "error";
  }
  return "?";
}

std::string_view label(Definiteness d) {
  switch (d) {
    case Definiteness::kDefinite: return "definite";
    case Definiteness::kIndefinite: return "indefinite";
    case Definiteness::kUnknown: return "unknown";
  }
  return "?";
}

std::string_view label(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::kParseFailure: return "parse_failure";
    case ExclusionReason::kMissingRoles: return "missing_roles";
    case ExclusionReason::kOther: return "other";
  }
  return "?";
}

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<Enum, N>& values) {
  auto it = std::find_if(values.begin(), values.end(),
                         [s](Enum v) { return label(v) == s; });
  if (it == values.end()) return std::nullopt;
  return *it;
}

}  // namespace

std::optional<FocusCondition> parse_condition(std::string_view s) {
  return lookup(s, kAllConditions);
}

std::optional<SourceKind> parse_source_kind(std::string_view s) {
  return lookup(s, std::array{SourceKind::kHuman, SourceKind::kVlm});
}

std::optional<SentenceType> parse_sentence_type(std::string_view s) {
  return lookup(s, kAllSentenceTypes);
}

std::optional<ISType> parse_is_type(std::string_view s) {
  return lookup(s, kAllIsTypes);
}

std::optional<Definiteness> parse_definiteness(std::string_view s) {
  return lookup(s, std::array{Definiteness::kDefinite, Definiteness::kIndefinite,
                              Definiteness::kUnknown});
}

std::optional<ExclusionReason> parse_exclusion_reason(std::string_view s) {
  return lookup(s, std::array{ExclusionReason::kParseFailure,
                              ExclusionReason::kMissingRoles,
                              ExclusionReason::kOther});
}

}  // namespace fokusz
