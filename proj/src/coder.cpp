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

#include "fokusz/coder.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <map>

#include "fokusz/text.hpp"

namespace fokusz::coder {

std::string RoleSequence::letters() const {
  std::string out;
  for (const auto& e : entries) out += label(e.role);
  return out;
}

const RoleEntry* RoleSequence::find(Role role) const {
  for (const auto& e : entries) {
    if (e.role == role) return &e;
  }
  return nullptr;
}

bool RoleSequence::complete() const {
  return find(Role::kS) && find(Role::kO) && find(Role::kV) && find(Role::kI);
}

namespace {

std::optional<Role> role_for(std::string_view deprel) {
  if (conllu::deprel_matches(deprel, "nsubj")) return Role::kS;
  if (conllu::deprel_matches(deprel, "obj")) return Role::kO;
  if (conllu::deprel_matches(deprel, "compound:preverb")) return Role::kI;
  return std::nullopt;
}

// Extent of the subtree rooted at `top`. Cycles in malformed input are cut by
// the visited set.
TokenSpan subtree_extent(const conllu::ParsedSentence& s, int top) {
  std::map<int, std::vector<int>> children;
  for (const auto& t : s.tokens) children[t.head].push_back(t.index);
  TokenSpan span{top, top};
  std::vector<int> stack{top};
  std::vector<int> visited;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    if (std::find(visited.begin(), visited.end(), cur) != visited.end()) continue;
    visited.push_back(cur);
    span.first = std::min(span.first, cur);
    span.last = std::max(span.last, cur);
    auto it = children.find(cur);
    if (it == children.end()) continue;
    for (int c : it->second) stack.push_back(c);
  }
  return span;
}

}  // namespace

std::vector<RoleEntry> collapse_adjacent(std::vector<RoleEntry> entries) {
  std::vector<RoleEntry> out;
  for (auto& e : entries) {
    if (!out.empty() && out.back().role == e.role) {
      out.back().span.first = std::min(out.back().span.first, e.span.first);
      out.back().span.last = std::max(out.back().span.last, e.span.last);
      continue;
    }
    out.push_back(e);
  }
  return out;
}

Extraction extract_roles(const conllu::ParsedSentence& sentence, const StimulusItem& stimulus) {
  const conllu::Token* root = sentence.root();
  if (!root) return {std::nullopt, ExclusionReason::kParseFailure};

  std::vector<RoleEntry> entries;
  entries.push_back({Role::kV, {root->index, root->index}, root->index});
  for (const auto& t : sentence.tokens) {
    if (t.head != root->index) continue;
    auto role = role_for(t.deprel);
    if (!role) continue;
    entries.push_back({*role, subtree_extent(sentence, t.index), t.index});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RoleEntry& a, const RoleEntry& b) { return a.anchor < b.anchor; });

  RoleSequence seq;
  bool has_i = std::any_of(entries.begin(), entries.end(),
                           [](const RoleEntry& e) { return e.role == Role::kI; });
  if (!has_i && !stimulus.preverb_lemma.empty()) {
    std::string form = text::casefold(root->form);
    std::string prefix = text::casefold(stimulus.preverb_lemma);
    if (form.size() > prefix.size() && form.starts_with(prefix)) {
      auto v = std::find_if(entries.begin(), entries.end(),
                            [](const RoleEntry& e) { return e.role == Role::kV; });
      entries.insert(v, RoleEntry{Role::kI, v->span, v->anchor});
      seq.preverb_attached = true;
    }
  }

  entries = collapse_adjacent(std::move(entries));

  // Non-adjacent repeats (S V S): the leftmost occurrence wins.
  std::array<bool, 4> seen{};
  for (const auto& e : entries) {
    auto& slot = seen[static_cast<std::size_t>(e.role)];
    if (slot) continue;
    slot = true;
    seq.entries.push_back(e);
  }

  if (!seq.complete()) return {std::nullopt, ExclusionReason::kMissingRoles};
  return {std::move(seq), std::nullopt};
}

SentenceType sentence_type_from_letters(std::string_view letters) {
  for (SentenceType st : kAllSentenceTypes) {
    if (st != SentenceType::kOtherOrder && label(st) == letters) return st;
  }
  return SentenceType::kOtherOrder;
}

SentenceType sentence_type(const RoleSequence& seq) {
  return sentence_type_from_letters(seq.letters());
}

ISType map_is_type(SentenceType st, FocusCondition cond) {
  if (cond == FocusCondition::kObjectFocus) {
    switch (st) {
      case SentenceType::kSIVO: return ISType::kTopPostVF;
      case SentenceType::kSOVI: return ISType::kTopPreVF;
      case SentenceType::kOVIS: return ISType::kPreVF;
      default: return ISType::kError;
    }
  }
  switch (st) {
    case SentenceType::kSVIO: return ISType::kPreVF;
    case SentenceType::kOSVI: return ISType::kTopPreVF;
    case SentenceType::kOIVS: return ISType::kTopPostVF;
    case SentenceType::kSIVO: return ISType::kDefault;
    default: return ISType::kError;
  }
}

std::optional<TokenSpan> focus_np(const RoleSequence& seq, SentenceType st, FocusCondition cond) {
  std::optional<Role> focus;
  if (cond == FocusCondition::kSubjectFocus &&
      (st == SentenceType::kSVIO || st == SentenceType::kOSVI)) {
    focus = Role::kS;
  } else if (cond == FocusCondition::kObjectFocus &&
             (st == SentenceType::kSOVI || st == SentenceType::kOVIS)) {
    focus = Role::kO;
  }
  if (!focus) return std::nullopt;
  const RoleEntry* e = seq.find(*focus);
  if (!e) return std::nullopt;
  return e->span;
}

Definiteness detect_definiteness(std::span<const conllu::Token> np) {
  auto nominal = [](const conllu::Token& t) { return t.upos == "NOUN" || t.upos == "PROPN"; };
  if (std::none_of(np.begin(), np.end(), nominal)) return Definiteness::kUnknown;

  // The head is the first token attached outside the span.
  const conllu::Token* head = nullptr;
  int lo = np.front().index;
  int hi = np.back().index;
  for (const auto& t : np) {
    if (t.head < lo || t.head > hi) {
      head = &t;
      break;
    }
  }

  for (const auto& t : np) {
    if (t.upos != "DET") continue;
    std::string lemma = text::casefold(t.lemma);
    if (lemma == "a" || lemma == "az") {
      auto def = t.feat("Definite");
      if (!def || *def == "Def") return Definiteness::kDefinite;
    } else if (auto def = t.feat("Definite"); def && *def == "Def") {
      return Definiteness::kDefinite;
    }
  }
  if (head && head->upos == "PROPN") return Definiteness::kDefinite;
  // "egy", a bare noun, or any determiner not marked definite
  return Definiteness::kIndefinite;
}

std::vector<conllu::Token> tokens_in(const conllu::ParsedSentence& sentence, TokenSpan span) {
  std::vector<conllu::Token> out;
  for (const auto& t : sentence.tokens) {
    if (span.contains(t.index)) out.push_back(t);
  }
  return out;
}

CodedRecord code_trial(const TrialRecord& trial,
                       std::span<const conllu::ParsedSentence* const> parses,
                       const StimulusItem* stimulus) {
  if (!stimulus) return CodedRecord::excluded(trial.trial_id, ExclusionReason::kOther);

  const conllu::ParsedSentence* chosen = nullptr;
  for (const auto* s : parses) {
    const conllu::Token* root = s->root();
    if (root && root->upos == "VERB") {
      chosen = s;
      break;
    }
  }
  if (!chosen) {
    for (const auto* s : parses) {
      if (s->root()) {
        chosen = s;
        break;
      }
    }
  }
  if (!chosen) return CodedRecord::excluded(trial.trial_id, ExclusionReason::kParseFailure);

  Extraction ex = extract_roles(*chosen, *stimulus);
  if (!ex.ok()) return CodedRecord::excluded(trial.trial_id, *ex.excluded);

  CodedRecord rec;
  rec.trial_id = trial.trial_id;
  SentenceType st = sentence_type(*ex.sequence);
  rec.sentence_type = st;
  rec.is_type = map_is_type(st, trial.condition);
  if (has_preverbal_focus(*rec.is_type)) {
    if (auto span = focus_np(*ex.sequence, st, trial.condition)) {
      std::vector<conllu::Token> np = tokens_in(*chosen, *span);
      rec.focus_definiteness = detect_definiteness(np);
    }
  }
  return rec;
}

ParseIndex index_by_response(std::span<const conllu::ParsedSentence> sentences) {
  ParseIndex index;
  for (const auto& s : sentences) {
    if (auto id = s.response_id()) index[std::string(*id)].push_back(&s);
  }
  return index;
}

std::vector<CodedRecord> code_all(std::span<const TrialRecord> trials, const ParseIndex& parses,
                                  std::span<const StimulusItem> manifest, Exec exec) {
  std::unordered_map<std::string, const StimulusItem*> items;
  for (const auto& it : manifest) items.emplace(it.item_id, &it);

  std::vector<CodedRecord> out(trials.size());
  auto code_one = [&](std::size_t i) {
    const TrialRecord& t = trials[i];
    auto item = items.find(t.item_id);
    auto p = parses.find(t.trial_id);
    std::span<const conllu::ParsedSentence* const> blocks;
    if (p != parses.end()) blocks = p->second;
    out[i] = code_trial(t, blocks, item == items.end() ? nullptr : item->second);
  };

  const auto n = static_cast<std::ptrdiff_t>(trials.size());
  if (exec == Exec::kSerial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) code_one(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) code_one(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace fokusz::coder
