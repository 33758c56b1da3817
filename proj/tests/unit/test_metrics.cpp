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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fokusz/error.hpp"
#include "fokusz/metrics.hpp"

namespace fokusz::metrics {
namespace {

CodedTrial make(std::string source, std::uint32_t run, FocusCondition cond, int serial,
                std::optional<ISType> t, std::optional<Definiteness> d = std::nullopt) {
  CodedTrial c;
  c.trial.source_id = std::move(source);
  c.trial.run_index = run;
  c.trial.condition = cond;
  c.trial.item_id = "item" + std::to_string(serial);
  c.trial.trial_id = c.trial.source_id + "/" + std::to_string(run) + "/" +
                     std::string(label(cond)) + "/" + c.trial.item_id;
  c.coding.trial_id = c.trial.trial_id;
  if (t) {
    c.coding.is_type = *t;
    c.coding.sentence_type = SentenceType::kSOVI;
    c.coding.focus_definiteness = d;
  } else {
    c.coding.exclusion_reason = ExclusionReason::kMissingRoles;
  }
  return c;
}

// Appends n records of one IS-type.
void add(std::vector<CodedTrial>& v, const std::string& src, FocusCondition cond,
         std::optional<ISType> t, int n, std::optional<Definiteness> d = std::nullopt) {
  for (int i = 0; i < n; ++i)
    v.push_back(make(src, 0, cond, static_cast<int>(v.size()), t, d));
}

const auto kObj = FocusCondition::kObjectFocus;
const auto kSubj = FocusCondition::kSubjectFocus;

TEST(Metrics, AllTopPreVf) {
  std::vector<CodedTrial> v;
  add(v, "m", kObj, ISType::kTopPreVF, 10);
  auto p = build_profiles(v);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].count(ISType::kTopPreVF), 10u);
  EXPECT_DOUBLE_EQ(p[0].proportion(ISType::kTopPreVF), 1.0);
}

TEST(Metrics, ExclusionsCountedSeparately) {
  std::vector<CodedTrial> v;
  add(v, "m", kObj, ISType::kTopPreVF, 8);
  add(v, "m", kObj, std::nullopt, 2);
  auto p = build_profiles(v);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].n_categorised, 8u);
  EXPECT_EQ(p[0].n_excluded, 2u);
  EXPECT_DOUBLE_EQ(p[0].proportion(ISType::kTopPreVF), 1.0);
}

TEST(Metrics, EmptyProfileThrows) {
  std::vector<CodedTrial> v;
  add(v, "m", kObj, std::nullopt, 3);
  auto p = build_profiles(v);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_THROW(topicalisation_probability(p[0]), Error);
  for (double x : p[0].proportions()) EXPECT_EQ(x, 0.0);
}

TEST(Metrics, OrphanRecord) {
  std::vector<CodedRecord> coded(1);
  coded[0].trial_id = "nope";
  coded[0].exclusion_reason = ExclusionReason::kOther;
  std::vector<TrialRecord> trials;
  try {
    build_profiles(coded, trials);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOrphanRecord);
  }
}

TEST(Metrics, JoinedAndEmbeddedAgree) {
  std::vector<CodedTrial> v;
  add(v, "m", kObj, ISType::kTopPreVF, 4);
  add(v, "m", kSubj, ISType::kPreVF, 3);
  add(v, "m", kSubj, std::nullopt, 1);
  std::vector<CodedRecord> coded;
  std::vector<TrialRecord> trials;
  for (const auto& c : v) {
    coded.push_back(c.coding);
    trials.push_back(c.trial);
  }
  EXPECT_EQ(build_profiles(coded, trials), build_profiles(v));
}

// Counts rebuilt from published percentage rows.
RunProfile from_percent(FocusCondition cond, std::array<double, 5> pct, std::uint64_t n) {
  RunProfile p;
  p.condition = cond;
  std::uint64_t assigned = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    auto c = static_cast<std::uint64_t>(std::llround(pct[i] / 100.0 * static_cast<double>(n)));
    p.counts[i] = c;
    assigned += c;
    if (pct[i] > pct[largest]) largest = i;
  }
  p.counts[largest] += n - assigned;  // absorb rounding in the modal cell
  p.n_categorised = n;
  return p;
}

TEST(Metrics, ReconstructedTableRows) {
  auto vlm_obj = from_percent(kObj, {0, 0.4, 81.4, 11.1, 7.1}, 6705);
  auto vlm_subj = from_percent(kSubj, {3.6, 85.6, 10.4, 0, 0.4}, 7589);
  auto hum_obj = from_percent(kObj, {0, 18.4, 81.0, 0.6, 0}, 705);
  auto hum_subj = from_percent(kSubj, {0.1, 31.6, 68.1, 0.1, 0}, 708);
  const std::array<double, 5> want = {0, 0.4, 81.4, 11.1, 7.1};
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_NEAR(vlm_obj.proportions()[i] * 100, want[i], 0.05);

  EXPECT_NEAR(topicalisation_probability(vlm_obj), 0.925, 0.001);
  EXPECT_NEAR(topicalisation_probability(vlm_subj), 0.104, 0.001);
  EXPECT_NEAR(topicalisation_probability(hum_obj), 0.816, 0.001);
  EXPECT_NEAR(topicalisation_probability(hum_subj), 0.682, 0.001);

  std::vector<RunProfile> vlm = {vlm_obj, vlm_subj};
  std::vector<RunProfile> hum = {hum_obj, hum_subj};
  EXPECT_NEAR(topicalisation_delta(vlm).delta, -0.821, 0.0015);
  EXPECT_NEAR(topicalisation_delta(hum).delta, -0.134, 0.0015);
}

TEST(Metrics, DeltaSymmetryAndMissingCondition) {
  std::vector<CodedTrial> v;
  add(v, "m", kObj, ISType::kTopPreVF, 3);
  add(v, "m", kObj, ISType::kPreVF, 2);
  add(v, "m", kSubj, ISType::kTopPreVF, 3);
  add(v, "m", kSubj, ISType::kPreVF, 2);
  auto p = build_profiles(v);
  EXPECT_DOUBLE_EQ(topicalisation_delta(p).delta, 0.0);
  std::vector<RunProfile> one = {p[0]};
  try {
    topicalisation_delta(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingCondition);
  }
}

TEST(Metrics, ZeroTopicIsZero) {
  std::vector<CodedTrial> v;
  add(v, "m", kSubj, ISType::kPreVF, 5);
  add(v, "m", kSubj, ISType::kDefault, 5);
  EXPECT_EQ(topicalisation_probability(build_profiles(v)[0]), 0.0);
}

TEST(Metrics, Indefiniteness) {
  std::vector<CodedRecord> all_def;
  std::vector<CodedTrial> v;
  add(v, "gpt", kObj, ISType::kTopPreVF, 20, Definiteness::kDefinite);
  for (const auto& c : v) all_def.push_back(c.coding);
  EXPECT_EQ(indefiniteness_proportion(all_def), 0.0);

  std::vector<CodedTrial> g;
  add(g, "gemma", kObj, ISType::kTopPreVF, 41, Definiteness::kIndefinite);
  add(g, "gemma", kObj, ISType::kPreVF, 59, Definiteness::kDefinite);
  add(g, "gemma", kObj, ISType::kTopPreVF, 7, Definiteness::kUnknown);
  add(g, "gemma", kObj, ISType::kTopPostVF, 30, std::nullopt);
  add(g, "gemma", kObj, std::nullopt, 4);
  std::vector<CodedRecord> gc;
  for (const auto& c : g) gc.push_back(c.coding);
  EXPECT_NEAR(*indefiniteness_proportion(gc), 0.41, 1e-12);

  std::vector<CodedTrial> none;
  add(none, "x", kSubj, ISType::kDefault, 5);
  std::vector<CodedRecord> nc;
  for (const auto& c : none) nc.push_back(c.coding);
  EXPECT_FALSE(indefiniteness_proportion(nc).has_value());
}

// Conservation, permutation invariance and pooling over random datasets.
TEST(Metrics, RandomProperties) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    std::vector<CodedTrial> v;
    int n = 1 + static_cast<int>(rng() % 400);
    for (int i = 0; i < n; ++i) {
      auto src = "s" + std::to_string(rng() % 3);
      auto run = static_cast<std::uint32_t>(rng() % 4);
      auto cond = rng() % 2 ? kObj : kSubj;
      std::optional<ISType> t;
      if (rng() % 5) t = kAllIsTypes[rng() % 5];
      v.push_back(make(src, run, cond, i, t));
    }
    auto p = build_profiles(v);
    std::uint64_t total = 0;
    for (const auto& r : p) {
      std::uint64_t s = 0;
      for (auto c : r.counts) s += c;
      EXPECT_EQ(s, r.n_categorised);
      total += r.n_categorised + r.n_excluded;
      if (r.n_categorised) {
        double sum = 0;
        for (double x : r.proportions()) sum += x;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        double tp = topicalisation_probability(r);
        EXPECT_GE(tp, 0.0);
        EXPECT_LE(tp, 1.0);
      }
    }
    EXPECT_EQ(total, static_cast<std::uint64_t>(n));

    auto shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(build_profiles(shuffled), p);

    // Pooled proportion equals the count-weighted mean of per-run proportions.
    for (const auto& pooled : pool_runs(p)) {
      if (!pooled.n_categorised) continue;
      for (auto t : kAllIsTypes) {
        double num = 0;
        for (const auto& r : p)
          if (r.source_id == pooled.source_id && r.condition == pooled.condition)
            num += r.proportion(t) * static_cast<double>(r.n_categorised);
        EXPECT_NEAR(num / static_cast<double>(pooled.n_categorised), pooled.proportion(t), 1e-12);
      }
    }

    for (const auto& d : all_deltas(p)) {
      EXPECT_GE(d.delta, -1.0);
      EXPECT_LE(d.delta, 1.0);
    }
  }
}

TEST(Metrics, TopicalisationMonotone) {
  RunProfile p;
  p.add(ISType::kPreVF, 5);
  p.add(ISType::kError, 5);
  double prev = topicalisation_probability(p);
  for (int i = 0; i < 20; ++i) {
    p.add(ISType::kTopPreVF);
    double now = topicalisation_probability(p);
    EXPECT_GT(now, prev);
    prev = now;
  }
}

TEST(Metrics, CsvShape) {
  std::vector<CodedTrial> v;
  add(v, "m", kObj, ISType::kTopPreVF, 3);
  add(v, "m", kSubj, ISType::kPreVF, 1);
  auto p = build_profiles(v);
  auto csv = proportions_csv(p);
  EXPECT_NE(csv.find("1.0000"), std::string::npos);
  auto d = all_deltas(p);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].delta, -1.0);
  EXPECT_NE(deltas_csv(d).find("-1.0000"), std::string::npos);
}

}  // namespace
}  // namespace fokusz::metrics
