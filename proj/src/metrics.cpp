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

#include "fokusz/metrics.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "fokusz/text.hpp"

namespace fokusz::metrics {

double RunProfile::proportion(ISType t) const {
  if (n_categorised == 0) return 0.0;
  return static_cast<double>(count(t)) / static_cast<double>(n_categorised);
}

std::array<double, kNumIsTypes> RunProfile::proportions() const {
  std::array<double, kNumIsTypes> p{};
  for (ISType t : kAllIsTypes) p[index_of(t)] = proportion(t);
  return p;
}

namespace {

using ProfileKey = std::tuple<std::string, std::uint32_t, FocusCondition>;

void tally(std::map<ProfileKey, RunProfile>& groups, const TrialRecord& trial,
           const CodedRecord& coding) {
  ProfileKey key{trial.source_id, trial.run_index, trial.condition};
  auto [it, inserted] = groups.try_emplace(key);
  RunProfile& p = it->second;
  if (inserted) {
    p.source_id = trial.source_id;
    p.source_kind = trial.source_kind;
    p.run_index = trial.run_index;
    p.condition = trial.condition;
  }
  if (coding.is_type) {
    p.add(*coding.is_type);
  } else {
    ++p.n_excluded;
  }
}

std::vector<RunProfile> flatten(std::map<ProfileKey, RunProfile>& groups) {
  std::vector<RunProfile> out;
  out.reserve(groups.size());
  for (auto& [k, p] : groups) out.push_back(std::move(p));
  return out;
}

}  // namespace

std::vector<RunProfile> build_profiles(std::span<const CodedRecord> coded,
                                       std::span<const TrialRecord> trials) {
  std::unordered_map<std::string, const TrialRecord*> by_id;
  for (const auto& t : trials) by_id.emplace(t.trial_id, &t);
  std::map<ProfileKey, RunProfile> groups;
  for (const auto& c : coded) {
    auto it = by_id.find(c.trial_id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::kOrphanRecord, "no trial for coded record " + c.trial_id);
    }
    tally(groups, *it->second, c);
  }
  return flatten(groups);
}

std::vector<RunProfile> build_profiles(std::span<const CodedTrial> coded) {
  std::map<ProfileKey, RunProfile> groups;
  for (const auto& c : coded) tally(groups, c.trial, c.coding);
  return flatten(groups);
}

double topicalisation_probability(const RunProfile& profile) {
  if (profile.n_categorised == 0) {
    throw Error(ErrorKind::kEmptyProfile, "no categorised responses for " + profile.source_id +
                                              " run " + std::to_string(profile.run_index) +
                                              " " + std::string(label(profile.condition)));
  }
  auto topics = profile.count(ISType::kTopPreVF) + profile.count(ISType::kTopPostVF);
  return static_cast<double>(topics) / static_cast<double>(profile.n_categorised);
}

DeltaRecord topicalisation_delta(std::span<const RunProfile> profiles) {
  const RunProfile* obj = nullptr;
  const RunProfile* subj = nullptr;
  for (const auto& p : profiles) {
    if (obj || subj) {
      const RunProfile* ref = obj ? obj : subj;
      if (p.source_id != ref->source_id || p.run_index != ref->run_index) {
        throw Error(ErrorKind::kInvalidArgument, "profiles span more than one source/run");
      }
    }
    (p.condition == FocusCondition::kObjectFocus ? obj : subj) = &p;
  }
  if (!obj || !subj) {
    std::string who = profiles.empty() ? std::string("<none>") : profiles.front().source_id;
    throw Error(ErrorKind::kMissingCondition, "need both conditions for " + who);
  }
  DeltaRecord d;
  d.source_id = obj->source_id;
  d.run_index = obj->run_index;
  d.p_topic_obj = topicalisation_probability(*obj);
  d.p_topic_subj = topicalisation_probability(*subj);
  d.delta = d.p_topic_subj - d.p_topic_obj;
  return d;
}

std::vector<DeltaRecord> all_deltas(std::span<const RunProfile> profiles) {
  std::map<std::pair<std::string, std::uint32_t>, std::vector<RunProfile>> by_run;
  for (const auto& p : profiles) {
    if (p.n_categorised == 0) continue;
    by_run[{p.source_id, p.run_index}].push_back(p);
  }
  std::vector<DeltaRecord> out;
  for (const auto& [key, group] : by_run) {
    if (group.size() != 2) continue;
    out.push_back(topicalisation_delta(group));
  }
  return out;
}

std::vector<RunProfile> pool_runs(std::span<const RunProfile> profiles) {
  std::map<std::pair<std::string, FocusCondition>, RunProfile> pooled;
  for (const auto& p : profiles) {
    auto [it, inserted] = pooled.try_emplace({p.source_id, p.condition});
    RunProfile& q = it->second;
    if (inserted) {
      q.source_id = p.source_id;
      q.source_kind = p.source_kind;
      q.condition = p.condition;
    }
    for (std::size_t i = 0; i < kNumIsTypes; ++i) q.counts[i] += p.counts[i];
    q.n_categorised += p.n_categorised;
    q.n_excluded += p.n_excluded;
  }
  std::vector<RunProfile> out;
  for (auto& [k, p] : pooled) out.push_back(std::move(p));
  return out;
}

DefinitenessCount count_definiteness(std::span<const CodedRecord> coded) {
  DefinitenessCount c;
  for (const auto& r : coded) {
    if (!r.is_type || !has_preverbal_focus(*r.is_type) || !r.focus_definiteness) continue;
    if (*r.focus_definiteness == Definiteness::kDefinite) ++c.definite;
    if (*r.focus_definiteness == Definiteness::kIndefinite) ++c.indefinite;
  }
  return c;
}

std::optional<double> indefiniteness_proportion(std::span<const CodedRecord> coded) {
  return count_definiteness(coded).proportion();
}

std::string proportions_csv(std::span<const RunProfile> profiles) {
  std::string out = "source_id,run_index,condition,is_type,proportion,n\n";
  for (const auto& p : profiles) {
    for (ISType t : kAllIsTypes) {
      out += text::csv_escape(p.source_id) + ',' + std::to_string(p.run_index) + ',' +
             std::string(label(p.condition)) + ',' + std::string(label(t)) + ',' +
             text::fixed(p.proportion(t)) + ',' + std::to_string(p.count(t)) + '\n';
    }
  }
  return out;
}

std::string deltas_csv(std::span<const DeltaRecord> deltas) {
  std::string out = "source_id,run_index,p_topic_obj,p_topic_subj,delta\n";
  for (const auto& d : deltas) {
    out += text::csv_escape(d.source_id) + ',' + std::to_string(d.run_index) + ',' +
           text::fixed(d.p_topic_obj) + ',' + text::fixed(d.p_topic_subj) + ',' +
           text::fixed(d.delta) + '\n';
  }
  return out;
}

}  // namespace fokusz::metrics
