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

// Synthetic datasets drawn from explicit IS-type strategy profiles, with gold
// parses and gold codings. Used as the end-to-end oracle for the coder,
// metrics and clustering.

#ifndef FOKUSZ_SIMGEN_HPP_
#define FOKUSZ_SIMGEN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fokusz/conllu.hpp"
#include "fokusz/corpus.hpp"
#include "fokusz/parallel.hpp"

namespace fokusz::simgen {

struct StrategyProfile {
  std::string name;
  SourceKind source_kind = SourceKind::kVlm;
  // [condition][IS-type], in kAllIsTypes order; each row sums to 1.
  std::array<std::array<double, kNumIsTypes>, 2> distribution{};
  // Probability that a generated Focus NP is indefinite, per condition.
  std::array<double, 2> indefinite_rate{};

  const std::array<double, kNumIsTypes>& of(FocusCondition c) const {
    return distribution[index_of(c)];
  }
};

// InvalidProfile when a row does not sum to 1 (1e-9), a probability is out
// of range, or mass sits on an IS-type the condition cannot realise (there is
// no default order under object focus).
void validate(const StrategyProfile& profile);

// Rescales non-negative weights (e.g. published percentages) to a profile.
StrategyProfile from_weights(std::string name, SourceKind kind,
                             const std::array<double, kNumIsTypes>& obj_weights,
                             const std::array<double, kNumIsTypes>& subj_weights,
                             std::array<double, 2> indefinite_rate);

StrategyProfile parse_profile(std::string_view json);
StrategyProfile load_profile(const std::filesystem::path& path);
std::string profile_to_json(const StrategyProfile& profile);

// Sentence types that realise `is_type` under `cond`. Error draws from every
// infelicitous listed order plus the verb-initial order.
std::vector<SentenceType> realisations(ISType is_type, FocusCondition cond);

struct Dataset {
  std::vector<TrialRecord> trials;
  std::vector<CodedRecord> gold;
  std::vector<conllu::ParsedSentence> parses;
};

// Trial i of a condition uses stimulus i mod |stimuli| in run i / |stimuli|.
// Each trial draws from its own seeded stream, so output is identical for
// any thread count.
Dataset generate(const StrategyProfile& profile, std::span<const StimulusItem> stimuli,
                 std::size_t trials_per_condition, std::uint64_t seed,
                 Exec exec = Exec::kParallel);

// Members of a simulated population that share one strategy.
struct Cohort {
  StrategyProfile profile;
  std::size_t members = 0;
};

// One source per cohort member, named "<profile name>-NN" with NN the
// member's 1-based position in the whole population. Member m draws from
// derive_seed(seed, m).
Dataset generate_population(std::span<const Cohort> cohorts, std::span<const StimulusItem> stimuli,
                            std::size_t trials_per_condition, std::uint64_t seed,
                            Exec exec = Exec::kParallel);

// Profiles shipped with the library: per-model and aggregated rows of the
// published IS-type distribution table with the published indefiniteness
// medians, the human aggregate, and the three human strategy clusters.
std::vector<StrategyProfile> builtin_profiles();
std::optional<StrategyProfile> builtin_profile(std::string_view name);

// Surface realisation of one sentence type with a chosen Focus article.
conllu::ParsedSentence realise(const StimulusItem& item, SentenceType st, FocusCondition cond,
                               bool focus_indefinite, const std::string& response_id);

// The NP that carries Focus (preverbal or post-verbal) in a realisation.
std::optional<Role> focus_role(SentenceType st, FocusCondition cond);

}  // namespace fokusz::simgen

#endif  // FOKUSZ_SIMGEN_HPP_
