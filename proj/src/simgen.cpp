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

#include "fokusz/simgen.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iterator>

#include "fokusz/error.hpp"
#include "fokusz/random.hpp"
#include "fokusz/text.hpp"
#include "json.hpp"

namespace fokusz::simgen {

void validate(const StrategyProfile& p) {
  for (FocusCondition c : kAllConditions) {
    double total = 0.0;
    for (ISType t : kAllIsTypes) {
      double v = p.of(c)[index_of(t)];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::kInvalidProfile, p.name + ": probability out of range");
      }
      if (v > 0.0 && realisations(t, c).empty()) {
        throw Error(ErrorKind::kInvalidProfile,
                    p.name + ": " + std::string(label(t)) + " cannot occur under " +
                        std::string(label(c)));
      }
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
      throw Error(ErrorKind::kInvalidProfile,
                  p.name + ": " + std::string(label(c)) + " distribution sums to " +
                      std::to_string(total));
    }
    double rate = p.indefinite_rate[index_of(c)];
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw Error(ErrorKind::kInvalidProfile, p.name + ": indefinite_rate out of range");
    }
  }
}

StrategyProfile from_weights(std::string name, SourceKind kind,
                             const std::array<double, kNumIsTypes>& obj_weights,
                             const std::array<double, kNumIsTypes>& subj_weights,
                             std::array<double, 2> indefinite_rate) {
  StrategyProfile p;
  p.name = std::move(name);
  p.source_kind = kind;
  p.indefinite_rate = indefinite_rate;
  const std::array<const std::array<double, kNumIsTypes>*, 2> rows = {&obj_weights, &subj_weights};
  for (std::size_t c = 0; c < 2; ++c) {
    double total = 0.0;
    for (double w : *rows[c]) {
      if (!(w >= 0.0)) throw Error(ErrorKind::kInvalidProfile, p.name + ": negative weight");
      total += w;
    }
    if (!(total > 0.0)) throw Error(ErrorKind::kInvalidProfile, p.name + ": all weights zero");
    for (std::size_t t = 0; t < kNumIsTypes; ++t) p.distribution[c][t] = (*rows[c])[t] / total;
  }
  validate(p);
  return p;
}

StrategyProfile parse_profile(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidProfile, e.what());
  }
  try {
    auto kind = parse_source_kind(j.value("source_kind", std::string("vlm")));
    if (!kind) throw Error(ErrorKind::kInvalidProfile, "unknown source_kind");
    std::array<std::array<double, kNumIsTypes>, 2> w{};
    std::array<double, 2> rates{};
    for (FocusCondition c : kAllConditions) {
      const auto& row = j.at(std::string(label(c)));
      for (ISType t : kAllIsTypes) {
        w[index_of(c)][index_of(t)] = row.value(std::string(label(t)), 0.0);
      }
      rates[index_of(c)] = j.at("indefinite_rate").at(std::string(label(c))).get<double>();
    }
    // Rows already summing to 1 are kept verbatim so profiles round-trip
    // exactly; anything else is read as weights.
    auto unit = [](const auto& row) {
      double s = 0.0;
      for (double v : row) s += v;
      return std::abs(s - 1.0) <= 1e-9;
    };
    if (unit(w[0]) && unit(w[1])) {
      StrategyProfile p;
      p.name = j.at("name").get<std::string>();
      p.source_kind = *kind;
      p.distribution = w;
      p.indefinite_rate = rates;
      validate(p);
      return p;
    }
    return from_weights(j.at("name").get<std::string>(), *kind, w[0], w[1], rates);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidProfile, e.what());
  }
}

StrategyProfile load_profile(const std::filesystem::path& path) {
  return parse_profile(text::read_file(path));
}

std::string profile_to_json(const StrategyProfile& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["source_kind"] = label(p.source_kind);
  for (FocusCondition c : kAllConditions) {
    nlohmann::ordered_json row;
    for (ISType t : kAllIsTypes) row[std::string(label(t))] = p.of(c)[index_of(t)];
    j[std::string(label(c))] = row;
  }
  j["indefinite_rate"] = {{"OBJ_FOC", p.indefinite_rate[0]}, {"SUBJ_FOC", p.indefinite_rate[1]}};
  return j.dump(2) + "\n";
}

std::vector<SentenceType> realisations(ISType is_type, FocusCondition cond) {
  using S = SentenceType;
  const bool obj = cond == FocusCondition::kObjectFocus;
  switch (is_type) {
    case ISType::kDefault: return obj ? std::vector<S>{} : std::vector<S>{S::kSIVO};
    case ISType::kPreVF: return {obj ? S::kOVIS : S::kSVIO};
    case ISType::kTopPreVF: return {obj ? S::kSOVI : S::kOSVI};
    case ISType::kTopPostVF: return {obj ? S::kSIVO : S::kOIVS};
    case ISType::kError:
      if (obj) return {S::kSVIO, S::kOSVI, S::kOIVS, S::kSOIV, S::kOtherOrder};
      return {S::kSOVI, S::kOVIS, S::kSOIV, S::kOtherOrder};
  }
  return {};
}

std::optional<Role> focus_role(SentenceType st, FocusCondition cond) {
  using S = SentenceType;
  if (cond == FocusCondition::kObjectFocus) {
    switch (st) {
      case S::kSVIO:
      case S::kOSVI: return Role::kS;
      case S::kSIVO:
      case S::kSOVI:
      case S::kOVIS: return Role::kO;
      default: return std::nullopt;
    }
  }
  switch (st) {
    case S::kSVIO:
    case S::kOSVI:
    case S::kOIVS: return Role::kS;
    case S::kSOVI:
    case S::kOVIS: return Role::kO;
    default: return std::nullopt;
  }
}

namespace {

enum class Slot { kSubj, kObj, kVerb, kPreverb, kFused };

std::vector<Slot> template_for(SentenceType st) {
  using enum Slot;
  switch (st) {
    case SentenceType::kSVIO: return {kSubj, kVerb, kPreverb, kObj};
    case SentenceType::kOSVI: return {kObj, kSubj, kVerb, kPreverb};
    case SentenceType::kOIVS: return {kObj, kFused, kSubj};
    case SentenceType::kSIVO: return {kSubj, kFused, kObj};
    case SentenceType::kSOVI: return {kSubj, kObj, kVerb, kPreverb};
    case SentenceType::kOVIS: return {kObj, kVerb, kPreverb, kSubj};
    case SentenceType::kSOIV: return {kSubj, kObj, kFused};
    case SentenceType::kOtherOrder: return {kFused, kSubj, kObj};
  }
  return {};
}

bool starts_with_vowel(std::string_view word) {
  static constexpr std::array<std::string_view, 14> kVowels = {
      "a", "á", "e", "é", "i", "í", "o", "ó", "ö", "ő", "u", "ú", "ü", "ű"};
  std::string folded = text::casefold(word);
  for (auto v : kVowels) {
    if (std::string_view(folded).starts_with(v)) return true;
  }
  return false;
}

std::string strip_article(std::string_view np) {
  np = text::trim(np);
  for (std::string_view art : {"a ", "az ", "egy ", "A ", "Az ", "Egy "}) {
    if (np.starts_with(art)) return std::string(text::trim(np.substr(art.size())));
  }
  return std::string(np);
}

}  // namespace

conllu::ParsedSentence realise(const StimulusItem& item, SentenceType st, FocusCondition cond,
                               bool focus_indefinite, const std::string& response_id) {
  auto focus = focus_role(st, cond);
  const bool subj_indef = focus_indefinite && focus == Role::kS;
  const bool obj_indef = focus_indefinite && focus == Role::kO;
  const std::string subj = strip_article(item.subject_np);
  const std::string obj = strip_article(item.object_np);
  // definite conjugation with a definite object
  const std::string verb_form = obj_indef ? item.verb_lemma : item.verb_lemma + "i";

  std::vector<Slot> slots = template_for(st);
  // token index of every slot's head word, assigned before heads are resolved
  std::vector<int> head_index(slots.size());
  int next = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == Slot::kSubj || slots[i] == Slot::kObj) {
      head_index[i] = next + 1;
      next += 2;
    } else {
      head_index[i] = next++;
    }
  }
  int verb_index = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == Slot::kVerb || slots[i] == Slot::kFused) verb_index = head_index[i];
  }

  conllu::ParsedSentence s;
  s.meta[std::string(conllu::kResponseIdKey)] = response_id;
  auto add = [&](std::string form, std::string lemma, std::string upos,
                 std::map<std::string, std::string> feats, int head, std::string deprel) {
    conllu::Token t;
    t.index = static_cast<int>(s.tokens.size()) + 1;
    t.form = std::move(form);
    t.lemma = std::move(lemma);
    t.upos = std::move(upos);
    t.feats = std::move(feats);
    t.head = head;
    t.deprel = std::move(deprel);
    s.tokens.push_back(std::move(t));
  };
  auto add_np = [&](const std::string& noun, bool indefinite, bool subject, int noun_index) {
    std::string article = indefinite ? "egy" : (starts_with_vowel(noun) ? "az" : "a");
    add(article, article, "DET",
        {{"Definite", indefinite ? "Ind" : "Def"}, {"PronType", "Art"}}, noun_index, "det");
    add(noun, noun, "NOUN", {{"Case", subject ? "Nom" : "Acc"}, {"Number", "Sing"}}, verb_index,
        subject ? "nsubj" : "obj");
  };

  for (std::size_t i = 0; i < slots.size(); ++i) {
    switch (slots[i]) {
      case Slot::kSubj: add_np(subj, subj_indef, true, head_index[i]); break;
      case Slot::kObj: add_np(obj, obj_indef, false, head_index[i]); break;
      case Slot::kVerb:
        add(verb_form, item.verb_lemma, "VERB", {{"Mood", "Ind"}, {"Person", "3"}}, 0, "root");
        break;
      case Slot::kPreverb:
        add(item.preverb_lemma, item.preverb_lemma, "ADV", {}, verb_index, "compound:preverb");
        break;
      case Slot::kFused:
        add(item.preverb_lemma + verb_form, item.preverb_lemma + item.verb_lemma, "VERB",
            {{"Mood", "Ind"}, {"Person", "3"}}, 0, "root");
        break;
    }
  }
  add(".", ".", "PUNCT", {}, verb_index, "punct");
  s.tokens.front().form = text::capitalize_first(s.tokens.front().form);

  std::string sentence_text;
  for (const auto& t : s.tokens) {
    if (!sentence_text.empty() && t.upos != "PUNCT") sentence_text += ' ';
    sentence_text += t.form;
  }
  s.meta["text"] = sentence_text;
  return s;
}

Dataset generate(const StrategyProfile& profile, std::span<const StimulusItem> stimuli,
                 std::size_t trials_per_condition, std::uint64_t seed, Exec exec) {
  validate(profile);
  if (stimuli.empty()) throw Error(ErrorKind::kInvalidArgument, "no stimuli to generate from");

  const std::size_t n = 2 * trials_per_condition;
  Dataset d;
  d.trials.resize(n);
  d.gold.resize(n);
  d.parses.resize(n);

  auto make = [&](std::size_t slot_index) {
    const FocusCondition cond = kAllConditions[slot_index / trials_per_condition];
    const std::size_t i = slot_index % trials_per_condition;
    const StimulusItem& item = stimuli[i % stimuli.size()];
    const auto run = static_cast<std::uint32_t>(i / stimuli.size());
    Rng rng(derive_seed(seed, (static_cast<std::uint64_t>(index_of(cond)) << 40) | i));

    // categorical draw over IS-types
    const auto& dist = profile.of(cond);
    double u = rng.uniform();
    ISType is_type = kAllIsTypes.back();
    double acc = 0.0;
    for (ISType t : kAllIsTypes) {
      acc += dist[index_of(t)];
      if (u < acc && dist[index_of(t)] > 0.0) {
        is_type = t;
        break;
      }
    }
    if (dist[index_of(is_type)] == 0.0) {
      // rounding left u above the cumulative sum; take the last positive type
      for (ISType t : kAllIsTypes) {
        if (dist[index_of(t)] > 0.0) is_type = t;
      }
    }
    std::vector<SentenceType> options = realisations(is_type, cond);
    SentenceType st = options[rng.below(options.size())];
    bool indefinite = rng.bernoulli(profile.indefinite_rate[index_of(cond)]);

    TrialRecord& t = d.trials[slot_index];
    t.trial_id = profile.name + "/r" + std::to_string(run) + "/" + std::string(label(cond)) +
                 "/" + item.item_id;
    t.source_id = profile.name;
    t.source_kind = profile.source_kind;
    t.run_index = run;
    t.condition = cond;
    t.item_id = item.item_id;
    t.seed = static_cast<std::int64_t>(seed);

    d.parses[slot_index] = realise(item, st, cond, indefinite, t.trial_id);
    t.response_text = d.parses[slot_index].meta["text"];

    CodedRecord& g = d.gold[slot_index];
    g.trial_id = t.trial_id;
    g.sentence_type = st;
    g.is_type = is_type;
    if (is_type == ISType::kPreVF || is_type == ISType::kTopPreVF) {
      g.focus_definiteness = indefinite ? Definiteness::kIndefinite : Definiteness::kDefinite;
    }
  };

  const auto total = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::kSerial) {
    for (std::ptrdiff_t i = 0; i < total; ++i) make(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < total; ++i) make(static_cast<std::size_t>(i));
  }
  return d;
}

Dataset generate_population(std::span<const Cohort> cohorts, std::span<const StimulusItem> stimuli,
                            std::size_t trials_per_condition, std::uint64_t seed, Exec exec) {
  std::size_t total = 0;
  for (const auto& c : cohorts) total += c.members;
  const int width = std::max<int>(2, static_cast<int>(std::to_string(total).size()));
  Dataset all;
  std::uint64_t member = 0;
  for (const auto& cohort : cohorts) {
    for (std::size_t m = 0; m < cohort.members; ++m) {
      ++member;
      StrategyProfile p = cohort.profile;
      std::string n = std::to_string(member);
      p.name += "-" + std::string(static_cast<std::size_t>(width) - n.size(), '0') + n;
      Dataset d = generate(p, stimuli, trials_per_condition, derive_seed(seed, member), exec);
      std::move(d.trials.begin(), d.trials.end(), std::back_inserter(all.trials));
      std::move(d.gold.begin(), d.gold.end(), std::back_inserter(all.gold));
      std::move(d.parses.begin(), d.parses.end(), std::back_inserter(all.parses));
    }
  }
  return all;
}

std::vector<StrategyProfile> builtin_profiles() {
  using W = std::array<double, kNumIsTypes>;
  const SourceKind vlm = SourceKind::kVlm;
  const SourceKind human = SourceKind::kHuman;
  // weights: default, preVF, Top-preVF, Top-postVF, error (percent)
  // rates: indefinite Focus NP under object focus, subject focus
  std::vector<StrategyProfile> out;
  out.push_back(from_weights("vlm-aggregated", vlm, W{0.0, 0.4, 81.4, 11.1, 7.1},
                             W{3.6, 85.6, 10.4, 0.0, 0.4}, {0.125, 0.02}));
  out.push_back(from_weights("claude-opus-4", vlm, W{0.0, 0.0, 84.8, 15.0, 0.2},
                             W{0.2, 99.7, 0.1, 0.0, 0.1}, {0.12, 0.05}));
  out.push_back(from_weights("gemini-2.5-pro", vlm, W{0.0, 0.0, 96.3, 2.0, 1.8},
                             W{6.5, 90.0, 3.5, 0.0, 0.1}, {0.10, 0.03}));
  out.push_back(from_weights("gemma-3-12b", vlm, W{0.0, 0.0, 98.3, 1.0, 0.7},
                             W{7.1, 90.1, 0.5, 0.0, 2.3}, {0.41, 0.0}));
  out.push_back(from_weights("gemma-3-27b", vlm, W{0.0, 0.0, 92.3, 0.4, 7.3},
                             W{0.0, 99.6, 0.4, 0.0, 0.0}, {0.12, 0.02}));
  out.push_back(from_weights("mistral-small-3.1", vlm, W{0.0, 3.5, 18.9, 27.3, 50.3},
                             W{6.3, 73.0, 20.2, 0.0, 0.4}, {0.0, 0.02}));
  out.push_back(from_weights("gpt-4.1", vlm, W{0.0, 0.0, 76.5, 23.4, 0.1},
                             W{2.3, 62.8, 35.0, 0.0, 0.0}, {0.0, 0.0}));
  out.push_back(from_weights("human", human, W{0.0, 18.4, 81.0, 0.6, 0.0},
                             W{0.1, 31.6, 68.1, 0.1, 0.0}, {0.43, 0.43}));
  // Human strategy clusters (35 / 13 / 3 participants).
  out.push_back(from_weights("human-cluster-1", human, W{0.0, 5.0, 95.0, 0.0, 0.0},
                             W{0.0, 15.0, 85.0, 0.0, 0.0}, {0.43, 0.43}));
  out.push_back(from_weights("human-cluster-2", human, W{0.0, 40.0, 60.0, 0.0, 0.0},
                             W{0.0, 75.0, 25.0, 0.0, 0.0}, {0.43, 0.43}));
  out.push_back(from_weights("human-cluster-3", human, W{0.0, 0.0, 15.0, 75.0, 10.0},
                             W{15.0, 15.0, 0.0, 70.0, 0.0}, {0.43, 0.43}));
  return out;
}

std::optional<StrategyProfile> builtin_profile(std::string_view name) {
  for (auto& p : builtin_profiles()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

}  // namespace fokusz::simgen
