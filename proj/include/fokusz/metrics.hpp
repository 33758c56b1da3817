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

// Per-run IS-type profiles and the discourse measures computed from them.

#ifndef FOKUSZ_METRICS_HPP_
#define FOKUSZ_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fokusz/corpus.hpp"
#include "fokusz/types.hpp"

namespace fokusz::metrics {

struct RunProfile {
  std::string source_id;
  SourceKind source_kind = SourceKind::kVlm;
  std::uint32_t run_index = 0;
  FocusCondition condition = FocusCondition::kObjectFocus;
  std::array<std::uint64_t, kNumIsTypes> counts{};
  std::uint64_t n_categorised = 0;
  std::uint64_t n_excluded = 0;

  std::uint64_t count(ISType t) const { return counts[index_of(t)]; }
  void add(ISType t, std::uint64_t n = 1) {
    counts[index_of(t)] += n;
    n_categorised += n;
  }
  // 0 for every category when nothing was categorised.
  double proportion(ISType t) const;
  std::array<double, kNumIsTypes> proportions() const;

  bool operator==(const RunProfile&) const = default;
};

// One profile per (source, run, condition), sorted by that key.
// OrphanRecord when a coded record's trial is not among `trials`.
std::vector<RunProfile> build_profiles(std::span<const CodedRecord> coded,
                                       std::span<const TrialRecord> trials);
std::vector<RunProfile> build_profiles(std::span<const CodedTrial> coded);

// Share of categorised responses that have a Topic. Default and error
// responses stay in the denominator. EmptyProfile when nothing is categorised.
double topicalisation_probability(const RunProfile& profile);

struct DeltaRecord {
  std::string source_id;
  std::uint32_t run_index = 0;
  double p_topic_obj = 0.0;
  double p_topic_subj = 0.0;
  double delta = 0.0;  // subject-focus minus object-focus
};

// `profiles` must hold the two conditions of a single source and run;
// MissingCondition otherwise.
DeltaRecord topicalisation_delta(std::span<const RunProfile> profiles);

// Deltas for every (source, run) that has both conditions with categorised
// responses.
std::vector<DeltaRecord> all_deltas(std::span<const RunProfile> profiles);

// Sums counts per (source, condition) across runs. run_index of the result is 0.
std::vector<RunProfile> pool_runs(std::span<const RunProfile> profiles);

struct DefinitenessCount {
  std::uint64_t definite = 0;
  std::uint64_t indefinite = 0;

  std::optional<double> proportion() const {
    std::uint64_t n = definite + indefinite;
    if (n == 0) return std::nullopt;
    return static_cast<double>(indefinite) / static_cast<double>(n);
  }
};

// Only preverbal-Focus records with a definite/indefinite Focus NP count.
DefinitenessCount count_definiteness(std::span<const CodedRecord> coded);
std::optional<double> indefiniteness_proportion(std::span<const CodedRecord> coded);

// Tidy tables. Proportions are written with four decimals.
std::string proportions_csv(std::span<const RunProfile> profiles);
std::string deltas_csv(std::span<const DeltaRecord> deltas);

}  // namespace fokusz::metrics

#endif  // FOKUSZ_METRICS_HPP_
