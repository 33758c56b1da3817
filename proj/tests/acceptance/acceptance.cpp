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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "fokusz/coder.hpp"
#include "fokusz/conllu.hpp"
#include "fokusz/cluster.hpp"
#include "fokusz/distributions.hpp"
#include "fokusz/error.hpp"
#include "fokusz/metrics.hpp"
#include "fokusz/runner.hpp"
#include "fokusz/simgen.hpp"
#include "fokusz/stats.hpp"
#include "fokusz/text.hpp"
#include "testing.hpp"

namespace fk = fokusz;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Criterion = std::function<Outcome()>;

// ---------------------------------------------------------------------------
// 1

Outcome mapping() {
  using enum fk::SentenceType;
  using fk::ISType;
  Outcome o;
  struct Cell {
    fk::SentenceType st;
    fk::FocusCondition c;
    ISType want;
  };
  const auto O = fk::FocusCondition::kObjectFocus;
  const auto S = fk::FocusCondition::kSubjectFocus;
  const Cell cells[] = {
      {kSVIO, O, ISType::kError},     {kSVIO, S, ISType::kPreVF},
      {kOSVI, O, ISType::kError},     {kOSVI, S, ISType::kTopPreVF},
      {kOIVS, O, ISType::kError},     {kOIVS, S, ISType::kTopPostVF},
      {kSIVO, O, ISType::kTopPostVF}, {kSIVO, S, ISType::kDefault},
      {kSOVI, O, ISType::kTopPreVF},  {kSOVI, S, ISType::kError},
      {kOVIS, O, ISType::kPreVF},     {kOVIS, S, ISType::kError},
      {kSOIV, O, ISType::kError},     {kSOIV, S, ISType::kError},
  };
  int n = 0;
  for (const auto& cell : cells) {
    ++n;
    o.check(fk::coder::map_is_type(cell.st, cell.c) == cell.want,
            std::string(fk::label(cell.st)) + "/" + std::string(fk::label(cell.c)));
  }
  o.detail = o.pass ? std::to_string(n) + " cells" : o.detail;
  return o;
}

// ---------------------------------------------------------------------------
// 2

fk::metrics::RunProfile from_percent(fk::FocusCondition cond, std::array<double, 5> pct,
                                     std::uint64_t n) {
  fk::metrics::RunProfile p;
  p.condition = cond;
  std::uint64_t assigned = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    auto c = static_cast<std::uint64_t>(std::llround(pct[i] / 100.0 * static_cast<double>(n)));
    p.counts[i] = c;
    assigned += c;
    if (pct[i] > pct[largest]) largest = i;
  }
  p.counts[largest] += n - assigned;
  p.n_categorised = n;
  return p;
}

Outcome reconstruction() {
  using fk::FocusCondition;
  Outcome o;
  auto vo = from_percent(FocusCondition::kObjectFocus, {0, 0.4, 81.4, 11.1, 7.1}, 6705);
  auto vs = from_percent(FocusCondition::kSubjectFocus, {3.6, 85.6, 10.4, 0, 0.4}, 7589);
  auto ho = from_percent(FocusCondition::kObjectFocus, {0, 18.4, 81.0, 0.6, 0}, 705);
  auto hs = from_percent(FocusCondition::kSubjectFocus, {0.1, 31.6, 68.1, 0.1, 0}, 708);
  std::vector<fk::metrics::RunProfile> vlm = {vo, vs}, hum = {ho, hs};
  const double tol = 0.001;
  struct Check {
    const char* what;
    double got, want;
  } checks[] = {
      {"VLM OBJ", fk::metrics::topicalisation_probability(vo), 0.925},
      {"VLM SUBJ", fk::metrics::topicalisation_probability(vs), 0.104},
      {"VLM delta", fk::metrics::topicalisation_delta(vlm).delta, -0.821},
      {"human OBJ", fk::metrics::topicalisation_probability(ho), 0.816},
      {"human SUBJ", fk::metrics::topicalisation_probability(hs), 0.682},
      {"human delta", fk::metrics::topicalisation_delta(hum).delta, -0.134},
  };
  std::string summary;
  for (const auto& c : checks) {
    o.check(std::abs(c.got - c.want) <= tol + 1e-12,
            std::string(c.what) + " " + fk::text::fixed(c.got));
    summary += std::string(c.what) + "=" + fk::text::fixed(c.got, 3) + " ";
  }
  if (o.pass) o.detail = summary;
  return o;
}

// ---------------------------------------------------------------------------
// 3

Outcome coder_gold() {
  Outcome o;
  auto dir = fk::testing::fixtures() / "coder";
  auto manifest = fk::load_manifest(dir / "stimuli.csv");
  auto trials = fk::load_trials(dir / "trials.jsonl");
  auto parses = fk::conllu::parse(fk::text::read_file(dir / "parses.conllu"));
  auto gold = fk::load_coded(dir / "gold.jsonl");
  auto index = fk::coder::index_by_response(parses);
  auto coded = fk::coder::code_all(trials, index, manifest);

  std::size_t agree = 0;
  for (std::size_t i = 0; i < coded.size() && i < gold.size(); ++i) agree += coded[i] == gold[i].coding;
  o.check(coded.size() == gold.size() && agree == gold.size(),
          std::to_string(agree) + "/" + std::to_string(gold.size()) + " agree");
  o.check(parses.size() >= 40, "fewer than 40 parses");

  // coverage of the fixture corpus
  std::set<fk::SentenceType> orders;
  std::set<fk::FocusCondition> conds;
  bool fused = false, split = false, missing = false, collapsed = false;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    conds.insert(g.trial.condition);
    if (g.coding.sentence_type) orders.insert(*g.coding.sentence_type);
    if (g.coding.exclusion_reason == fk::ExclusionReason::kMissingRoles) missing = true;
    auto it = index.find(g.trial.trial_id);
    if (it == index.end()) continue;
    const auto* item = fk::find_item(manifest, g.trial.item_id);
    for (const auto* s : it->second) {
      auto ex = fk::coder::extract_roles(*s, *item);
      if (!ex.ok()) continue;
      (ex.sequence->preverb_attached ? fused : split) = true;
      for (const auto& e : ex.sequence->entries)
        if (e.role == fk::Role::kS || e.role == fk::Role::kO) {
          int kids = 0;
          for (const auto& t : s->tokens)
            if (t.head == s->root()->index && e.span.contains(t.index) &&
                (fk::conllu::deprel_matches(t.deprel, "nsubj") ||
                 fk::conllu::deprel_matches(t.deprel, "obj")))
              ++kids;
          if (kids > 1) collapsed = true;
        }
    }
  }
  int listed = 0;
  for (auto st : orders) listed += st != fk::SentenceType::kOtherOrder;
  o.check(listed == 7, "orders covered: " + std::to_string(listed));
  o.check(conds.size() == 2, "one condition only");
  o.check(fused && split, "fused/split preverbs not both covered");
  o.check(missing, "no missing-role case");
  o.check(collapsed, "no duplicate-collapse case");
  if (o.pass)
    o.detail = std::to_string(agree) + "/" + std::to_string(gold.size()) + " trials, " +
               std::to_string(parses.size()) + " parses";
  return o;
}

// ---------------------------------------------------------------------------
// 4

Outcome end_to_end() {
  Outcome o;
  auto stimuli = fk::testing::stimuli();
  auto profile = *fk::simgen::builtin_profile("vlm-aggregated");
  auto d = fk::simgen::generate(profile, stimuli, 5000, 20251015);
  auto coded = fk::coder::code_all(d.trials, fk::coder::index_by_response(d.parses), stimuli);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < coded.size(); ++i) agree += coded[i] == d.gold[i];
  o.check(d.trials.size() == 10000 && agree == d.trials.size(),
          std::to_string(agree) + "/" + std::to_string(d.trials.size()) + " agree");

  std::string ps;
  for (auto cond : fk::kAllConditions) {
    std::array<double, fk::kNumIsTypes> obs{};
    double n = 0;
    for (std::size_t i = 0; i < coded.size(); ++i) {
      if (d.trials[i].condition != cond || !coded[i].is_type) continue;
      obs[fk::index_of(*coded[i].is_type)] += 1;
      n += 1;
    }
    double x2 = 0;
    int cells = 0;
    for (std::size_t k = 0; k < fk::kNumIsTypes; ++k) {
      double e = profile.of(cond)[k] * n;
      if (e == 0) {
        o.check(obs[k] == 0, "mass on an impossible category");
        continue;
      }
      x2 += (obs[k] - e) * (obs[k] - e) / e;
      ++cells;
    }
    double p = fk::stats::chi2_sf(x2, cells - 1);
    o.check(p > 0.01, std::string(fk::label(cond)) + " goodness-of-fit p=" + std::to_string(p));
    ps += std::string(fk::label(cond)) + " p=" + fk::text::fixed(p, 3) + " ";
  }
  if (o.pass) o.detail = std::to_string(agree) + " trials agree, " + ps;
  return o;
}

// ---------------------------------------------------------------------------
// 5

double kw_oracle(const std::vector<std::vector<double>>& g) {
  std::vector<double> all;
  for (const auto& x : g) all.insert(all.end(), x.begin(), x.end());
  const std::size_t n = all.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      less += all[j] < all[i];
      equal += all[j] == all[i];
    }
    rank[i] = less + (equal + 1) / 2;
  }
  double N = static_cast<double>(n), h = 0;
  std::size_t at = 0;
  for (const auto& x : g) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += rank[at++];
    h += s * s / static_cast<double>(x.size());
  }
  h = 12.0 / (N * (N + 1)) * h - 3 * (N + 1);
  std::map<double, double> counts;
  for (double v : all) counts[v] += 1;
  double ties = 0;
  for (auto [v, t] : counts) ties += t * t * t - t;
  double corr = 1 - ties / (N * N * N - N);
  return corr > 0 ? h / corr : 0.0;
}

Outcome stats_oracles() {
  Outcome o;
  // Wilcoxon: every tie structure of |d| (compositions of m) times every sign
  // pattern, for m = 1..8, against enumeration of all 2^m sign flips.
  std::size_t wil = 0;
  double worst = 0;
  for (std::size_t m = 1; m <= 8; ++m) {
    for (std::uint32_t comp = 0; comp < (1u << (m - 1)); ++comp) {
      std::vector<double> absd(m);
      double level = 1;
      for (std::size_t i = 0; i < m; ++i) {
        if (i > 0 && (comp >> (i - 1) & 1)) level += 1;
        absd[i] = level;
      }
      // midranks by direct counting
      std::vector<double> rank(m);
      for (std::size_t i = 0; i < m; ++i) {
        double less = 0, equal = 0;
        for (std::size_t j = 0; j < m; ++j) {
          less += absd[j] < absd[i];
          equal += absd[j] == absd[i];
        }
        rank[i] = less + (equal + 1) / 2;
      }
      const double center = std::accumulate(rank.begin(), rank.end(), 0.0) / 2;
      std::vector<double> wsum(1u << m);
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < m; ++i)
          if (mask >> i & 1) w += rank[i];
        wsum[mask] = w;
      }
      for (std::uint32_t signs = 0; signs < (1u << m); ++signs) {
        std::vector<double> x(m), y(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) x[i] = (signs >> i & 1) ? absd[i] : -absd[i];
        double dev = std::abs(wsum[signs] - center);
        std::uint64_t extreme = 0;
        for (double w : wsum) extreme += std::abs(w - center) >= dev - 1e-9;
        double want = static_cast<double>(extreme) / static_cast<double>(wsum.size());
        auto r = fk::stats::wilcoxon_signed_rank(x, y);
        double err = std::abs(r.p_value - want);
        worst = std::max(worst, err);
        ++wil;
        o.check(err <= 1e-12 && r.statistic == wsum[signs], "Wilcoxon m=" + std::to_string(m));
      }
    }
  }

  // Kruskal-Wallis: every size triple up to 4 per group, with distinct and
  // with paired-tie values. The statistic is compared on every relabelling;
  // the permutation p on every relabelling when there are at most 6000 of
  // them, otherwise on 200 evenly spaced ones.
  std::size_t kw_stat = 0, kw_perm = 0;
  for (std::size_t a = 1; a <= 4; ++a)
    for (std::size_t b = 1; b <= 4; ++b)
      for (std::size_t c = 1; c <= 4; ++c)
        for (int tied = 0; tied < 2; ++tied) {
          const std::size_t n = a + b + c;
          std::vector<double> pool(n);
          for (std::size_t i = 0; i < n; ++i) pool[i] = tied ? static_cast<double>(i / 2) : i + 1.0;
          std::vector<int> labels;
          labels.insert(labels.end(), a, 0);
          labels.insert(labels.end(), b, 1);
          labels.insert(labels.end(), c, 2);
          std::vector<std::vector<std::vector<double>>> instances;
          std::vector<double> hs;
          do {
            std::vector<std::vector<double>> g(3);
            for (std::size_t i = 0; i < n; ++i) g[labels[i]].push_back(pool[i]);
            hs.push_back(kw_oracle(g));
            instances.push_back(std::move(g));
          } while (std::next_permutation(labels.begin(), labels.end()));
          std::vector<double> sorted = hs;
          std::sort(sorted.begin(), sorted.end());
          const std::size_t total = instances.size();
          const std::size_t step = total <= 6000 ? 1 : total / 200;
          for (std::size_t k = 0; k < total; ++k) {
            auto r = fk::stats::kruskal_wallis(instances[k]);
            ++kw_stat;
            o.check(std::abs(r.statistic - hs[k]) <= 1e-9, "KW statistic");
            if (k % step) continue;
            double h = hs[k];
            auto first = std::lower_bound(sorted.begin(), sorted.end(),
                                          h - 1e-9 * std::max(1.0, h));
            double want = static_cast<double>(sorted.end() - first) / static_cast<double>(total);
            auto p = fk::stats::kruskal_wallis_permutation(instances[k]);
            ++kw_perm;
            o.check(std::abs(p.p_value - want) <= 1e-12,
                    "KW permutation sizes " + std::to_string(a) + std::to_string(b) +
                        std::to_string(c));
          }
        }

  // chi-square: direct summation of (O - E)^2 / E over all 2x2 tables <= 12.
  std::size_t chi = 0;
  for (std::uint64_t t11 = 0; t11 <= 12; ++t11)
    for (std::uint64_t t12 = 0; t12 <= 12; ++t12)
      for (std::uint64_t t21 = 0; t21 <= 12; ++t21)
        for (std::uint64_t t22 = 0; t22 <= 12; ++t22) {
          const double cell[2][2] = {{double(t11), double(t12)}, {double(t21), double(t22)}};
          double r[2] = {cell[0][0] + cell[0][1], cell[1][0] + cell[1][1]};
          double col[2] = {cell[0][0] + cell[1][0], cell[0][1] + cell[1][1]};
          double n = r[0] + r[1];
          auto table = fk::stats::ContingencyTable::from_rows({{t11, t12}, {t21, t22}});
          if (!r[0] || !r[1] || !col[0] || !col[1]) {
            bool threw = false;
            try {
              fk::stats::chi_square(table);
            } catch (const fk::Error& e) {
              threw = e.kind() == fk::ErrorKind::kDegenerateTable;
            }
            o.check(threw, "degenerate 2x2 accepted");
            ++chi;
            continue;
          }
          double x2 = 0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              double e = r[i] * col[j] / n;
              x2 += (cell[i][j] - e) * (cell[i][j] - e) / e;
            }
          double got = fk::stats::chi_square(table).statistic;
          o.check(std::abs(got - x2) <= 1e-10 * std::max(1.0, x2), "chi-square 2x2");
          ++chi;
        }
  if (o.pass) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu Wilcoxon cases (max err %.1e), %zu KW statistics, %zu KW permutation p, "
                  "%zu 2x2 tables",
                  wil, worst, kw_stat, kw_perm, chi);
    o.detail = buf;
  }
  return o;
}

// ---------------------------------------------------------------------------
// 6

Outcome cramers() {
  using fk::stats::ContingencyTable;
  Outcome o;
  double v1 = fk::stats::cramers_v(ContingencyTable::from_rows({{10, 0}, {0, 10}}));
  double v0 = fk::stats::cramers_v(ContingencyTable::from_rows({{5, 5}, {5, 5}}));
  o.check(std::abs(v1 - 1.0) <= 1e-12, "V([[10,0],[0,10]]) = " + std::to_string(v1));
  o.check(std::abs(v0) <= 1e-12, "V([[5,5],[5,5]]) = " + std::to_string(v0));
  const std::vector<std::vector<std::vector<std::uint64_t>>> tables = {
      {{10, 0}, {0, 10}}, {{8, 2}, {2, 8}}, {{12, 5, 3}, {4, 9, 7}}, {{3, 1}, {2, 6}, {5, 5}},
      {{818, 77}, {123, 675}}};
  for (const auto& rows : tables) {
    auto t = ContingencyTable::from_rows(rows);
    double base = fk::stats::cramers_v(t);
    for (std::uint64_t f = 1; f <= 5; ++f)
      o.check(std::abs(fk::stats::cramers_v(t.scaled(f)) - base) <= 1e-12, "scale invariance");
  }
  if (o.pass) o.detail = "V=1, V=0, scale 1..5 on 5 tables";
  return o;
}

// ---------------------------------------------------------------------------
// 7

Outcome power() {
  Outcome o;
  int cases = 0;
  for (double w : {0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0, 1.5})
    for (int df : {1, 2, 3, 4, 6, 10}) {
      auto r = fk::stats::required_n(w, df, 0.05, 0.8);
      double at = fk::stats::chi2_power(w, df, 0.05, static_cast<double>(r.required_n));
      double below = r.required_n > 1
                         ? fk::stats::chi2_power(w, df, 0.05, static_cast<double>(r.required_n - 1))
                         : 0.0;
      o.check(at >= 0.8 && below < 0.8, "minimality w=" + std::to_string(w) + " df=" +
                                            std::to_string(df));
      ++cases;
    }
  auto ref = fk::stats::required_n(0.5, 1, 0.05, 0.8);
  const long long reference = 32;
  o.check(std::llabs(static_cast<long long>(ref.required_n) - reference) <= 1,
          "reference N=" + std::to_string(ref.required_n));
  if (o.pass)
    o.detail = std::to_string(cases) + " grid points minimal; w=0.5 df=1 N=" +
               std::to_string(ref.required_n) + " (reference 32)";
  return o;
}

// ---------------------------------------------------------------------------
// 8

Outcome clustering() {
  Outcome o;
  auto stimuli = fk::testing::stimuli();
  std::vector<fk::simgen::Cohort> cohorts = {
      {*fk::simgen::builtin_profile("human-cluster-1"), 35},
      {*fk::simgen::builtin_profile("human-cluster-2"), 13},
      {*fk::simgen::builtin_profile("human-cluster-3"), 3}};
  int good = 0, k3 = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto d = fk::simgen::generate_population(cohorts, stimuli, 15, seed);
    std::vector<fk::CodedTrial> joined;
    for (std::size_t i = 0; i < d.trials.size(); ++i) joined.push_back({d.trials[i], d.gold[i]});
    auto points = fk::cluster::to_points(
        fk::cluster::build_vectors(fk::metrics::build_profiles(joined)));
    fk::cluster::KMeansOptions opts;
    opts.seed = seed;
    auto e = fk::cluster::elbow(points, 1, 8, opts);
    if (e.chosen_k != 3) continue;
    ++k3;
    opts.k = 3;
    auto c = fk::cluster::kmeans(points, opts);
    // match recovered clusters to true cohorts by majority membership
    std::map<int, std::map<std::string, int>> votes;
    for (const auto& [id, cl] : c.assignment) votes[cl][id.substr(0, id.rfind('-'))]++;
    std::map<std::string, std::size_t> recovered;
    std::set<std::string> used;
    for (const auto& [cl, v] : votes) {
      auto best = std::max_element(v.begin(), v.end(),
                                   [](auto& a, auto& b) { return a.second < b.second; });
      used.insert(best->first);
      recovered[best->first] = c.sizes[cl];
    }
    bool ok = used.size() == 3;
    for (const auto& co : cohorts)
      ok = ok && std::llabs(static_cast<long long>(recovered[co.profile.name]) -
                            static_cast<long long>(co.members)) <= 2;
    good += ok;
  }
  o.check(good >= 18, std::to_string(good) + "/20 seeds recovered (k=3 in " +
                          std::to_string(k3) + ")");
  if (o.pass)
    o.detail = "k=3 in " + std::to_string(k3) + "/20 seeds, sizes within 2 in " +
               std::to_string(good) + "/20";
  return o;
}

// ---------------------------------------------------------------------------
// 9

Outcome runner() {
  namespace rn = fk::runner;
  Outcome o;
  fk::testing::TempDir dir;
  auto all = fk::testing::stimuli();
  std::vector<fk::StimulusItem> stimuli(all.begin(), all.begin() + 2);
  fs::create_directories(dir / "images");
  for (const auto& s : stimuli)
    fs::copy_file(fs::path(FOKUSZ_GOLDEN) / "image.bin", dir.path() / s.image_ref);

  auto config = [&](const rn::StubServer& stub, const std::string& out) {
    rn::RunConfig c;
    c.endpoint = stub.url();
    c.model = "stub";
    c.runs = 3;
    c.max_inflight = 4;
    c.retry.backoff_base = std::chrono::milliseconds(2);
    c.timeout = std::chrono::seconds(5);
    c.api_key = "key";
    c.output = dir / out;
    c.image_root = dir.path();
    return c;
  };
  auto keyed = [](const fs::path& p) {
    std::set<fk::TrialKey> keys;
    auto trials = fk::load_trials(p);
    for (const auto& t : trials) keys.insert(fk::key_of(t));
    return std::pair{trials.size(), keys.size()};
  };

  {
    rn::StubServer stub;
    stub.start();
    auto r = rn::run_experiment(config(stub, "full.jsonl"), stimuli);
    auto [n, unique] = keyed(dir / "full.jsonl");
    o.check(r.succeeded == 12 && n == 12 && unique == 12, "full batch persisted " + std::to_string(n));
  }
  {
    rn::StubServer stub;
    stub.start();
    auto c = config(stub, "resume.jsonl");
    c.limit = 7;
    rn::run_experiment(c, stimuli);
    std::size_t first = stub.request_count();
    c.limit.reset();
    c.resume = true;
    rn::run_experiment(c, stimuli);
    std::size_t second = stub.request_count() - first;
    rn::run_experiment(c, stimuli);
    std::size_t third = stub.request_count() - first - second;
    auto [n, unique] = keyed(c.output);
    o.check(first == 7 && second == 5 && third == 0 && n == 12 && unique == 12,
            "resume requests " + std::to_string(first) + "+" + std::to_string(second) + "+" +
                std::to_string(third));
  }
  {
    rn::StubOptions opts;
    opts.plan = [](const nlohmann::json&, int arrival) {
      return arrival == 1 ? 429 : arrival == 2 ? 500 : 200;
    };
    rn::StubServer stub(opts);
    stub.start();
    auto r = rn::run_experiment(config(stub, "retry.jsonl"), stimuli);
    bool three = !r.attempts.empty();
    for (const auto& [id, a] : r.attempts) three = three && a == 3;
    auto [n, unique] = keyed(dir / "retry.jsonl");
    o.check(r.succeeded == 12 && r.failed == 0 && three && n == 12 && unique == 12 &&
                stub.request_count() == 36,
            "retry batch: " + std::to_string(r.succeeded) + " ok, " +
                std::to_string(stub.request_count()) + " requests");
  }
  if (o.pass) o.detail = "12 keyed records; resume 7+5+0 requests; 429/500 then 200 in 3 attempts";
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    double budget_s;
    Criterion run;
  };
  const Entry entries[] = {
      {1, "IS-type mapping", 1, mapping},
      {2, "metric reconstruction", 1, reconstruction},
      {3, "coder gold suite", 1, coder_gold},
      {4, "end-to-end simulation oracle", 30, end_to_end},
      {5, "statistics oracles", 120, stats_oracles},
      {6, "Cramer's V", 1, cramers},
      {7, "power solver", 10, power},
      {8, "clustering recovery", 30, clustering},
      {9, "runner contract", 10, runner},
  };
  int failed = 0;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > e.budget_s) {
      o.pass = false;
      o.detail += " (over time budget)";
    }
    std::printf("%s criterion %d: %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", e.id, e.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
