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

// Information-structure coding of parsed responses.
//
// A response is reduced to the order of its subject (S), object (O), main
// verb (V) and verb modifier (I), read off the direct dependents of the root.
// The order is a sentence type; sentence type and focus condition together
// determine the IS-type.

#ifndef FOKUSZ_CODER_HPP_
#define FOKUSZ_CODER_HPP_

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fokusz/conllu.hpp"
#include "fokusz/corpus.hpp"
#include "fokusz/parallel.hpp"
#include "fokusz/types.hpp"

namespace fokusz::coder {

// Inclusive range of 1-based token indices.
struct TokenSpan {
  int first = 0;
  int last = 0;

  bool contains(int index) const { return index >= first && index <= last; }
  bool operator==(const TokenSpan&) const = default;
};

struct RoleEntry {
  Role role;
  TokenSpan span;
  int anchor = 0;  // index of the token that carried the relation

  bool operator==(const RoleEntry&) const = default;
};

struct RoleSequence {
  std::vector<RoleEntry> entries;
  // The verb modifier is a prefix of the verb form; its I entry shares the
  // V span and sits immediately before V.
  bool preverb_attached = false;

  std::string letters() const;
  const RoleEntry* find(Role role) const;
  bool complete() const;

  bool operator==(const RoleSequence&) const = default;
};

struct Extraction {
  std::optional<RoleSequence> sequence;
  std::optional<ExclusionReason> excluded;

  bool ok() const { return sequence.has_value(); }
};

// Role assignment over the root's direct dependents followed by preverb
// recovery, adjacent-duplicate collapse and the four-role filter.
Extraction extract_roles(const conllu::ParsedSentence& sentence, const StimulusItem& stimulus);

// Adjacent entries with the same role merge into one span. Exposed for the
// idempotence property.
std::vector<RoleEntry> collapse_adjacent(std::vector<RoleEntry> entries);

SentenceType sentence_type(const RoleSequence& seq);
SentenceType sentence_type_from_letters(std::string_view letters);

ISType map_is_type(SentenceType st, FocusCondition cond);

// Span of the NP that is the preverbal Focus for (st, cond), if any.
std::optional<TokenSpan> focus_np(const RoleSequence& seq, SentenceType st, FocusCondition cond);

Definiteness detect_definiteness(std::span<const conllu::Token> np_tokens);

std::vector<conllu::Token> tokens_in(const conllu::ParsedSentence& sentence, TokenSpan span);

// Codes one trial from the sentence blocks carrying its response_id. Only the
// first block with a root verb is used.
CodedRecord code_trial(const TrialRecord& trial,
                       std::span<const conllu::ParsedSentence* const> parses,
                       const StimulusItem* stimulus);

using ParseIndex = std::unordered_map<std::string, std::vector<const conllu::ParsedSentence*>>;

// Groups sentences by response_id, keeping file order inside each group.
ParseIndex index_by_response(std::span<const conllu::ParsedSentence> sentences);

// One CodedRecord per trial, in trial order.
std::vector<CodedRecord> code_all(std::span<const TrialRecord> trials, const ParseIndex& parses,
                                  std::span<const StimulusItem> manifest,
                                  Exec exec = Exec::kParallel);

}  // namespace fokusz::coder

#endif  // FOKUSZ_CODER_HPP_
