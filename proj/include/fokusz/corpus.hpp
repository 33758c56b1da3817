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

// Experiment data model: stimuli manifests, trial records and coded records,
// with their CSV / JSONL persistence.

#ifndef FOKUSZ_CORPUS_HPP_
#define FOKUSZ_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fokusz/error.hpp"
#include "fokusz/types.hpp"

namespace fokusz {

struct StimulusItem {
  std::string item_id;
  std::string image_ref;
  std::string verb_lemma;
  std::string preverb_lemma;
  std::string subject_np;
  std::string object_np;
  std::string question_obj_focus;
  std::string question_subj_focus;

  const std::string& question(FocusCondition c) const {
    return c == FocusCondition::kObjectFocus ? question_obj_focus : question_subj_focus;
  }

  bool operator==(const StimulusItem&) const = default;
};

inline constexpr std::string_view kManifestHeader =
    "item_id,image_ref,verb_lemma,preverb_lemma,subject_np,object_np,"
    "question_obj_focus,question_subj_focus";

struct TrialRecord {
  std::string trial_id;
  std::string source_id;
  SourceKind source_kind = SourceKind::kVlm;
  std::uint32_t run_index = 0;
  FocusCondition condition = FocusCondition::kObjectFocus;
  std::string item_id;
  std::string response_text;
  std::optional<std::int64_t> seed;

  bool operator==(const TrialRecord&) const = default;
};

// Identity of a response event within a dataset.
using TrialKey = std::tuple<std::string, std::uint32_t, FocusCondition, std::string>;
inline TrialKey key_of(const TrialRecord& r) {
  return {r.source_id, r.run_index, r.condition, r.item_id};
}

// Coding outcome for one trial. A categorised record carries a sentence type
// and IS-type; an excluded one carries only an exclusion reason.
struct CodedRecord {
  std::string trial_id;
  std::optional<SentenceType> sentence_type;
  std::optional<ISType> is_type;
  std::optional<Definiteness> focus_definiteness;
  std::optional<ExclusionReason> exclusion_reason;

  bool categorised() const { return is_type.has_value(); }

  static CodedRecord excluded(std::string trial_id, ExclusionReason why) {
    CodedRecord r;
    r.trial_id = std::move(trial_id);
    r.exclusion_reason = why;
    return r;
  }

  bool operator==(const CodedRecord&) const = default;
};

// Throws InvalidArgument when the exclusion/definiteness invariants are broken.
void validate(const CodedRecord& record);

// A coded record joined with its trial: the row layout of coded JSONL files.
struct CodedTrial {
  TrialRecord trial;
  CodedRecord coding;

  bool operator==(const CodedTrial&) const = default;
};

// Manifest CSV.
std::vector<StimulusItem> parse_manifest(std::string_view csv);
std::vector<StimulusItem> load_manifest(const std::filesystem::path& path);
std::string serialize_manifest(std::span<const StimulusItem> items);

const StimulusItem* find_item(std::span<const StimulusItem> items, std::string_view item_id);

// Trials JSONL. Strict loaders throw MalformedRecord with the offending line.
struct LineError {
  std::size_t line = 0;
  std::string message;
};

template <typename T>
struct LenientLoad {
  std::vector<T> records;
  std::vector<LineError> errors;
  std::size_t lines = 0;  // non-blank input lines
};

LenientLoad<TrialRecord> parse_trials_lenient(std::string_view jsonl);
std::vector<TrialRecord> parse_trials(std::string_view jsonl);
std::vector<TrialRecord> load_trials(const std::filesystem::path& path);
std::string trial_to_json_line(const TrialRecord& record);
std::string serialize_trials(std::span<const TrialRecord> records);
void save_trials(std::span<const TrialRecord> records, const std::filesystem::path& path);

// Duplicate keys -> DuplicateTrial; unresolved item ids -> UnknownItem.
void validate_trials(std::span<const TrialRecord> records,
                     std::span<const StimulusItem> manifest);

// Coded JSONL (trial keys plus the coding columns).
LenientLoad<CodedTrial> parse_coded_lenient(std::string_view jsonl);
std::vector<CodedTrial> parse_coded(std::string_view jsonl);
std::vector<CodedTrial> load_coded(const std::filesystem::path& path);
std::string serialize_coded(std::span<const CodedTrial> records);
void save_coded(std::span<const CodedTrial> records, const std::filesystem::path& path);

}  // namespace fokusz

#endif  // FOKUSZ_CORPUS_HPP_
