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

#include "fokusz/corpus.hpp"

#include <set>
#include <unordered_set>

#include "fokusz/text.hpp"
#include "json.hpp"

namespace fokusz {

using ordered_json = nlohmann::ordered_json;

void validate(const CodedRecord& record) {
  if (record.exclusion_reason.has_value() == record.is_type.has_value()) {
    throw Error(ErrorKind::kInvalidArgument,
                "coded record " + record.trial_id +
                    ": exclusion_reason must be present iff is_type is absent");
  }
  if (record.focus_definiteness &&
      !(record.is_type && has_preverbal_focus(*record.is_type))) {
    throw Error(ErrorKind::kInvalidArgument,
                "coded record " + record.trial_id +
                    ": focus_definiteness set without a preverbal Focus");
  }
}

// ---------------------------------------------------------------------------
// Manifest

std::vector<StimulusItem> parse_manifest(std::string_view csv) {
  std::vector<StimulusItem> items;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view raw : text::split(csv, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (text::trim(raw).empty()) continue;
    if (!header_seen) {
      std::string_view header = raw;
      if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
      if (header != kManifestHeader) {
        throw Error(ErrorKind::kMalformedManifest,
                    "expected header '" + std::string(kManifestHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    bool ok = true;
    std::vector<std::string> f = text::parse_csv_line(raw, &ok);
    if (!ok || f.size() != 8) {
      throw Error(ErrorKind::kMalformedManifest,
                  "expected 8 fields, got " + std::to_string(f.size()), line_no);
    }
    for (auto& field : f) field = text::nfc(field);
    StimulusItem item{f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7]};
    if (item.item_id.empty()) {
      throw Error(ErrorKind::kMalformedManifest, "empty item_id", line_no);
    }
    if (item.preverb_lemma.empty()) {
      throw Error(ErrorKind::kMalformedManifest,
                  "item " + item.item_id + " has no preverb_lemma", line_no);
    }
    if (item.question_obj_focus.empty() || item.question_subj_focus.empty()) {
      throw Error(ErrorKind::kMalformedManifest,
                  "item " + item.item_id + " is missing a question", line_no);
    }
    if (!seen.insert(item.item_id).second) {
      throw Error(ErrorKind::kDuplicateItem, "item_id " + item.item_id, line_no);
    }
    items.push_back(std::move(item));
  }
  if (!header_seen) {
    throw Error(ErrorKind::kMalformedManifest, "missing header", 1);
  }
  return items;
}

std::vector<StimulusItem> load_manifest(const std::filesystem::path& path) {
  return parse_manifest(text::read_file(path));
}

std::string serialize_manifest(std::span<const StimulusItem> items) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const auto& it : items) {
    for (const std::string* f :
         {&it.item_id, &it.image_ref, &it.verb_lemma, &it.preverb_lemma, &it.subject_np,
          &it.object_np, &it.question_obj_focus, &it.question_subj_focus}) {
      if (f != &it.item_id) out += ',';
      out += text::csv_escape(*f);
    }
    out += '\n';
  }
  return out;
}

const StimulusItem* find_item(std::span<const StimulusItem> items, std::string_view item_id) {
  for (const auto& it : items) {
    if (it.item_id == item_id) return &it;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// JSONL helpers

namespace {

struct FieldError {
  std::string message;
};

const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError{std::string("missing key \"") + key + "\""};
  return *it;
}

std::string require_string(const nlohmann::json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw FieldError{std::string("\"") + key + "\" must be a string"};
  return text::nfc(v.get<std::string>());
}

template <typename T>
std::optional<T> optional_label(const nlohmann::json& obj, const char* key,
                                std::optional<T> (*parse)(std::string_view)) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw FieldError{std::string("\"") + key + "\" must be a string"};
  std::string s = it->get<std::string>();
  if (s == kNonCategorisableLabel) return std::nullopt;
  auto v = parse(s);
  if (!v) throw FieldError{std::string("unknown ") + key + " \"" + s + "\""};
  return v;
}

TrialRecord trial_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FieldError{"line is not a JSON object"};
  TrialRecord r;
  r.trial_id = require_string(j, "trial_id");
  r.source_id = require_string(j, "source_id");
  std::string kind = require_string(j, "source_kind");
  auto k = parse_source_kind(kind);
  if (!k) throw FieldError{"unknown source_kind \"" + kind + "\""};
  r.source_kind = *k;
  const auto& run = require(j, "run_index");
  if (!run.is_number_integer() || run.get<std::int64_t>() < 0 ||
      run.get<std::int64_t>() > UINT32_MAX) {
    throw FieldError{"\"run_index\" must be a non-negative integer"};
  }
  r.run_index = static_cast<std::uint32_t>(run.get<std::int64_t>());
  std::string cond = require_string(j, "condition");
  auto c = parse_condition(cond);
  if (!c) throw FieldError{"unknown condition \"" + cond + "\""};
  r.condition = *c;
  r.item_id = require_string(j, "item_id");
  r.response_text = require_string(j, "response_text");
  auto seed = j.find("seed");
  if (seed != j.end() && !seed->is_null()) {
    if (!seed->is_number_integer()) throw FieldError{"\"seed\" must be an integer"};
    r.seed = seed->get<std::int64_t>();
  }
  return r;
}

ordered_json trial_to_json(const TrialRecord& r) {
  ordered_json j;
  j["trial_id"] = text::nfc(r.trial_id);
  j["source_id"] = text::nfc(r.source_id);
  j["source_kind"] = label(r.source_kind);
  j["run_index"] = r.run_index;
  j["condition"] = label(r.condition);
  j["item_id"] = text::nfc(r.item_id);
  j["response_text"] = text::nfc(r.response_text);
  if (r.seed) {
    j["seed"] = *r.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

template <typename T, typename Convert>
LenientLoad<T> parse_jsonl(std::string_view jsonl, Convert convert) {
  LenientLoad<T> out;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split(jsonl, '\n')) {
    ++line_no;
    if (text::trim(raw).empty()) continue;
    ++out.lines;
    try {
      auto j = nlohmann::json::parse(raw);
      out.records.push_back(convert(j));
    } catch (const FieldError& e) {
      out.errors.push_back({line_no, e.message});
    } catch (const nlohmann::json::exception& e) {
      out.errors.push_back({line_no, e.what()});
    } catch (const Error& e) {
      out.errors.push_back({line_no, e.what()});
    }
  }
  return out;
}

template <typename T>
std::vector<T> strict(LenientLoad<T> loaded) {
  if (!loaded.errors.empty()) {
    const auto& e = loaded.errors.front();
    throw Error(ErrorKind::kMalformedRecord, e.message, e.line);
  }
  return std::move(loaded.records);
}

}  // namespace

LenientLoad<TrialRecord> parse_trials_lenient(std::string_view jsonl) {
  return parse_jsonl<TrialRecord>(jsonl, trial_from_json);
}

std::vector<TrialRecord> parse_trials(std::string_view jsonl) {
  return strict(parse_trials_lenient(jsonl));
}

std::vector<TrialRecord> load_trials(const std::filesystem::path& path) {
  return parse_trials(text::read_file(path));
}

std::string trial_to_json_line(const TrialRecord& record) {
  return trial_to_json(record).dump() + "\n";
}

std::string serialize_trials(std::span<const TrialRecord> records) {
  std::string out;
  for (const auto& r : records) out += trial_to_json_line(r);
  return out;
}

void save_trials(std::span<const TrialRecord> records, const std::filesystem::path& path) {
  text::write_file_atomic(path, serialize_trials(records));
}

void validate_trials(std::span<const TrialRecord> records,
                     std::span<const StimulusItem> manifest) {
  std::set<TrialKey> keys;
  std::unordered_set<std::string> items;
  for (const auto& it : manifest) items.insert(it.item_id);
  for (const auto& r : records) {
    if (!keys.insert(key_of(r)).second) {
      throw Error(ErrorKind::kDuplicateTrial,
                  "duplicate (source, run, condition, item) for trial " + r.trial_id);
    }
    if (!items.contains(r.item_id)) {
      throw Error(ErrorKind::kUnknownItem,
                  "trial " + r.trial_id + " references unknown item " + r.item_id);
    }
  }
}

// ---------------------------------------------------------------------------
// Coded JSONL

namespace {

CodedTrial coded_from_json(const nlohmann::json& j) {
  CodedTrial ct;
  ct.trial = trial_from_json(j);
  CodedRecord& c = ct.coding;
  c.trial_id = ct.trial.trial_id;
  c.sentence_type = optional_label<SentenceType>(j, "sentence_type", parse_sentence_type);
  c.is_type = optional_label<ISType>(j, "is_type", parse_is_type);
  c.focus_definiteness =
      optional_label<Definiteness>(j, "focus_definiteness", parse_definiteness);
  c.exclusion_reason =
      optional_label<ExclusionReason>(j, "exclusion_reason", parse_exclusion_reason);
  try {
    validate(c);
  } catch (const Error& e) {
    throw FieldError{e.what()};
  }
  return ct;
}

}  // namespace

LenientLoad<CodedTrial> parse_coded_lenient(std::string_view jsonl) {
  return parse_jsonl<CodedTrial>(jsonl, coded_from_json);
}

std::vector<CodedTrial> parse_coded(std::string_view jsonl) {
  return strict(parse_coded_lenient(jsonl));
}

std::vector<CodedTrial> load_coded(const std::filesystem::path& path) {
  return parse_coded(text::read_file(path));
}

std::string serialize_coded(std::span<const CodedTrial> records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j = trial_to_json(r.trial);
    const CodedRecord& c = r.coding;
    j["sentence_type"] = c.sentence_type ? label(*c.sentence_type) : kNonCategorisableLabel;
    j["is_type"] = c.is_type ? label(*c.is_type) : kNonCategorisableLabel;
    if (c.focus_definiteness) {
      j["focus_definiteness"] = label(*c.focus_definiteness);
    } else {
      j["focus_definiteness"] = nullptr;
    }
    if (c.exclusion_reason) {
      j["exclusion_reason"] = label(*c.exclusion_reason);
    } else {
      j["exclusion_reason"] = nullptr;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_coded(std::span<const CodedTrial> records, const std::filesystem::path& path) {
  text::write_file_atomic(path, serialize_coded(records));
}

}  // namespace fokusz
