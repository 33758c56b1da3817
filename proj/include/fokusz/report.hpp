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

// Dataset-level analysis behind the `analyze` and `report` commands:
// grouped profiles, deltas, indefiniteness rates, hypothesis tests and
// plot series.
//
// Analysis groups: every VLM source is its own group whose units are runs;
// all human participants form the group "human" whose units are
// participants.

#ifndef FOKUSZ_REPORT_HPP_
#define FOKUSZ_REPORT_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fokusz/corpus.hpp"
#include "fokusz/metrics.hpp"
#include "fokusz/stats.hpp"

namespace fokusz::report {

inline constexpr const char* kHumanGroup = "human";
inline constexpr const char* kAllVlmGroup = "vlm-aggregated";

// What the signed-rank tests pair across conditions: the unit (run or
// participant) or the stimulus item.
enum class PairBy { kRun, kItem };

std::optional<PairBy> parse_pair_by(std::string_view s);

struct AnalysisOptions {
  PairBy pair_by = PairBy::kRun;
  double alpha = 0.05;
};

std::string group_of(const TrialRecord& t);

struct IndefinitenessRow {
  std::string source_id;
  std::uint32_t run_index = 0;
  FocusCondition condition = FocusCondition::kObjectFocus;
  metrics::DefinitenessCount counts;
};

struct GroupTest {
  std::string group;
  std::size_t n_pairs = 0;
  std::optional<double> median_obj;
  std::optional<double> median_subj;
  std::optional<stats::TestResult> result;
  std::optional<double> p_bonf;
  std::string direction;  // "OBJ > SUBJ", "SUBJ > OBJ" or "n.s."
  std::string notice;
};

struct Analysis {
  std::vector<metrics::RunProfile> profiles;        // per (source, run, condition)
  std::vector<metrics::RunProfile> table;           // per VLM source, vlm-aggregated, human
  std::vector<metrics::DeltaRecord> deltas;         // per run
  std::vector<metrics::DeltaRecord> pooled_deltas;  // per row of `table`
  std::vector<IndefinitenessRow> indefiniteness;
  std::vector<std::string> omnibus_groups;
  std::optional<stats::TestResult> omnibus;
  std::vector<GroupTest> pairwise;
  std::vector<std::string> notices;
  PairBy pair_by = PairBy::kRun;
  // group -> condition -> per-unit values, for the plot series.
  std::map<std::string, std::map<FocusCondition, std::vector<double>>> unit_indefiniteness;
  std::map<std::string, std::vector<double>> unit_deltas;
  std::map<std::string, std::vector<metrics::RunProfile>> unit_profiles;
};

// EmptyDataset when no record is categorised.
Analysis analyze(std::span<const CodedTrial> coded, const AnalysisOptions& options = {});

// Linear-interpolation quantile of an unsorted sample; nullopt when empty.
std::optional<double> quantile(std::vector<double> values, double q);

std::string indefiniteness_csv(const Analysis& a);
std::string pooled_deltas_csv(const Analysis& a);
// {omnibus: {...}, pairwise: [...], notices: [...]}
std::string stats_json(const Analysis& a);
// Series for the IS-type distribution, topicalisation delta and
// indefiniteness figures.
std::string plot_json(const Analysis& a);

// Fixed-width text tables, four decimals. Identical input gives identical
// bytes. `clusters` is an optional source_id -> cluster assignment.
std::string render(const Analysis& a, const std::map<std::string, int>* clusters = nullptr);

}  // namespace fokusz::report

#endif  // FOKUSZ_REPORT_HPP_
