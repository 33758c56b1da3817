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

#include "fokusz/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fokusz/error.hpp"
#include "fokusz/text.hpp"
#include "json.hpp"

namespace fokusz::report {

using nlohmann::ordered_json;

std::optional<PairBy> parse_pair_by(std::string_view s) {
  if (s == "run") return PairBy::kRun;
  if (s == "item") return PairBy::kItem;
  return std::nullopt;
}

std::string group_of(const TrialRecord& t) {
  return t.source_kind == SourceKind::kHuman ? std::string(kHumanGroup) : t.source_id;
}

std::optional<double> quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

namespace {

std::string unit_of(const TrialRecord& t) {
  return t.source_kind == SourceKind::kHuman ? t.source_id : std::to_string(t.run_index);
}

bool counts_for_definiteness(const CodedRecord& c) {
  return c.is_type && has_preverbal_focus(*c.is_type) && c.focus_definiteness &&
         *c.focus_definiteness != Definiteness::kUnknown;
}

void add_definiteness(metrics::DefinitenessCount& dc, const CodedRecord& c) {
  if (!counts_for_definiteness(c)) return;
  if (*c.focus_definiteness == Definiteness::kIndefinite) {
    ++dc.indefinite;
  } else {
    ++dc.definite;
  }
}

metrics::RunProfile sum_profiles(const std::string& name, SourceKind kind, FocusCondition cond,
                                 std::span<const metrics::RunProfile> parts) {
  metrics::RunProfile p;
  p.source_id = name;
  p.source_kind = kind;
  p.condition = cond;
  for (const auto& q : parts) {
    if (q.condition != cond) continue;
    for (ISType t : kAllIsTypes) p.add(t, q.count(t));
    p.n_excluded += q.n_excluded;
  }
  return p;
}

std::optional<double> median(const std::vector<double>& v) { return quantile(v, 0.5); }

ordered_json number_or_null(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string opt_fixed(const std::optional<double>& v) { return v ? text::fixed(*v) : "n/a"; }

}  // namespace

Analysis analyze(std::span<const CodedTrial> coded, const AnalysisOptions& options) {
  if (std::none_of(coded.begin(), coded.end(),
                   [](const CodedTrial& c) { return c.coding.categorised(); })) {
    throw Error(ErrorKind::kEmptyDataset, "no categorised records to analyse");
  }
  Analysis a;
  a.pair_by = options.pair_by;
  a.profiles = metrics::build_profiles(coded);
  a.deltas = metrics::all_deltas(a.profiles);

  std::map<std::string, SourceKind> kinds;
  for (const auto& c : coded) kinds[c.trial.source_id] = c.trial.source_kind;

  // Table rows, one pair of conditions each: every VLM pooled over runs, all
  // VLMs together (when there are several), all humans.
  std::vector<metrics::RunProfile> pooled = metrics::pool_runs(a.profiles);
  std::vector<std::pair<std::string, std::vector<metrics::RunProfile>>> rows_of;
  std::vector<metrics::RunProfile> vlm_parts;
  std::vector<metrics::RunProfile> human_parts;
  for (const auto& p : pooled) {
    if (p.source_kind == SourceKind::kHuman) {
      human_parts.push_back(p);
      continue;
    }
    vlm_parts.push_back(p);
    if (rows_of.empty() || rows_of.back().first != p.source_id) {
      rows_of.push_back({p.source_id, {}});
    }
    rows_of.back().second.push_back(p);
  }
  std::size_t n_vlm = rows_of.size();
  if (n_vlm > 1) rows_of.push_back({kAllVlmGroup, vlm_parts});
  if (!human_parts.empty()) rows_of.push_back({kHumanGroup, human_parts});
  for (std::size_t i = 0; i < rows_of.size(); ++i) {
    const auto& [name, parts] = rows_of[i];
    SourceKind kind = (!human_parts.empty() && i + 1 == rows_of.size()) ? SourceKind::kHuman
                                                                        : SourceKind::kVlm;
    std::array<metrics::RunProfile, 2> pair = {
        sum_profiles(name, kind, FocusCondition::kObjectFocus, parts),
        sum_profiles(name, kind, FocusCondition::kSubjectFocus, parts)};
    a.table.push_back(pair[0]);
    a.table.push_back(pair[1]);
    if (pair[0].n_categorised > 0 && pair[1].n_categorised > 0) {
      a.pooled_deltas.push_back(metrics::topicalisation_delta(pair));
    }
  }

  // Indefiniteness per (source, run, condition) and per analysis unit.
  std::map<std::tuple<std::string, std::uint32_t, FocusCondition>, metrics::DefinitenessCount> rows;
  for (const auto& p : a.profiles) rows[{p.source_id, p.run_index, p.condition}];
  using UnitCounts = std::map<std::string, std::map<FocusCondition, std::map<std::string,
                                                   metrics::DefinitenessCount>>>;
  UnitCounts by_unit;
  UnitCounts by_item;
  for (const auto& c : coded) {
    const TrialRecord& t = c.trial;
    auto it = rows.find({t.source_id, t.run_index, t.condition});
    if (it != rows.end()) add_definiteness(it->second, c.coding);
    add_definiteness(by_unit[group_of(t)][t.condition][unit_of(t)], c.coding);
    add_definiteness(by_item[group_of(t)][t.condition][t.item_id], c.coding);
  }
  for (const auto& [key, counts] : rows) {
    a.indefiniteness.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), counts});
  }
  for (const auto& [group, conds] : by_unit) {
    for (FocusCondition cond : kAllConditions) {
      auto& values = a.unit_indefiniteness[group][cond];
      auto it = conds.find(cond);
      if (it == conds.end()) continue;
      for (const auto& [unit, dc] : it->second) {
        if (auto p = dc.proportion()) values.push_back(*p);
      }
    }
  }
  for (const auto& d : a.deltas) {
    TrialRecord probe;
    probe.source_id = d.source_id;
    probe.source_kind = kinds[d.source_id];
    a.unit_deltas[group_of(probe)].push_back(d.delta);
  }
  for (const auto& p : a.profiles) {
    TrialRecord probe;
    probe.source_id = p.source_id;
    probe.source_kind = p.source_kind;
    a.unit_profiles[group_of(probe)].push_back(p);
  }

  // Omnibus over group x condition cells (VLM groups when present).
  bool any_vlm = !vlm_parts.empty();
  std::vector<std::vector<double>> cells;
  for (const auto& [group, conds] : a.unit_indefiniteness) {
    if (any_vlm && group == kHumanGroup) continue;
    for (const auto& [cond, values] : conds) {
      if (values.empty()) continue;
      cells.push_back(values);
      a.omnibus_groups.push_back(group + "/" + std::string(label(cond)));
    }
  }
  try {
    a.omnibus = stats::kruskal_wallis(cells);
  } catch (const Error& e) {
    a.notices.push_back(std::string("omnibus test skipped: ") + e.what());
  }

  // Paired signed-rank tests between conditions, one per group.
  if (kinds.size() < 2) {
    a.notices.push_back("single source in dataset: pairwise tests skipped");
    return a;
  }
  const UnitCounts& pairing = options.pair_by == PairBy::kRun ? by_unit : by_item;
  std::vector<double> raw_p;
  std::vector<std::size_t> tested;
  for (const auto& [group, conds] : a.unit_indefiniteness) {
    GroupTest g;
    g.group = group;
    g.median_obj = median(conds.count(FocusCondition::kObjectFocus)
                              ? conds.at(FocusCondition::kObjectFocus)
                              : std::vector<double>{});
    g.median_subj = median(conds.count(FocusCondition::kSubjectFocus)
                               ? conds.at(FocusCondition::kSubjectFocus)
                               : std::vector<double>{});
    std::vector<double> x;
    std::vector<double> y;
    auto git = pairing.find(group);
    if (git != pairing.end()) {
      auto obj = git->second.find(FocusCondition::kObjectFocus);
      auto subj = git->second.find(FocusCondition::kSubjectFocus);
      if (obj != git->second.end() && subj != git->second.end()) {
        for (const auto& [unit, dc] : obj->second) {
          auto other = subj->second.find(unit);
          if (other == subj->second.end()) continue;
          auto po = dc.proportion();
          auto ps = other->second.proportion();
          if (!po || !ps) continue;
          x.push_back(*po);
          y.push_back(*ps);
        }
      }
    }
    g.n_pairs = x.size();
    g.direction = "n.s.";
    if (x.empty()) {
      g.notice = "no paired units with preverbal Focus in both conditions";
    } else {
      try {
        g.result = stats::wilcoxon_signed_rank(x, y);
        raw_p.push_back(g.result->p_value);
        tested.push_back(a.pairwise.size());
      } catch (const Error& e) {
        g.notice = e.what();
      }
    }
    a.pairwise.push_back(std::move(g));
  }
  std::vector<double> adjusted = stats::bonferroni(raw_p);
  for (std::size_t i = 0; i < tested.size(); ++i) {
    GroupTest& g = a.pairwise[tested[i]];
    g.p_bonf = adjusted[i];
    if (adjusted[i] < options.alpha) {
      // W+ counts positive obj - subj differences.
      double expected = 0.0;
      for (std::size_t m = g.n_pairs; m > 0; --m) expected += static_cast<double>(m);
      g.direction = g.result->statistic > expected / 2.0 ? "OBJ > SUBJ" : "SUBJ > OBJ";
    }
  }
  return a;
}

std::string indefiniteness_csv(const Analysis& a) {
  std::string out = "source_id,run_index,condition,definite,indefinite,proportion\n";
  for (const auto& r : a.indefiniteness) {
    auto p = r.counts.proportion();
    out += text::csv_escape(r.source_id) + ',' + std::to_string(r.run_index) + ',' +
           std::string(label(r.condition)) + ',' + std::to_string(r.counts.definite) + ',' +
           std::to_string(r.counts.indefinite) + ',' + (p ? text::fixed(*p) : "") + '\n';
  }
  return out;
}

std::string pooled_deltas_csv(const Analysis& a) { return metrics::deltas_csv(a.pooled_deltas); }

std::string stats_json(const Analysis& a) {
  ordered_json j;
  j["pair_by"] = a.pair_by == PairBy::kRun ? "run" : "item";
  if (a.omnibus) {
    j["omnibus"] = {{"method", label(a.omnibus->method)},
                    {"statistic", a.omnibus->statistic},
                    {"df", a.omnibus->df},
                    {"p", a.omnibus->p_value},
                    {"groups", a.omnibus_groups}};
  } else {
    j["omnibus"] = nullptr;
  }
  j["pairwise"] = ordered_json::array();
  for (const auto& g : a.pairwise) {
    ordered_json t;
    t["group"] = g.group;
    t["n_pairs"] = g.n_pairs;
    t["median_obj"] = number_or_null(g.median_obj);
    t["median_subj"] = number_or_null(g.median_subj);
    if (g.result) {
      t["method"] = label(g.result->method);
      t["statistic"] = g.result->statistic;
      t["df"] = g.result->df;
      t["p"] = g.result->p_value;
      t["p_bonf"] = number_or_null(g.p_bonf);
    }
    t["direction"] = g.direction;
    if (!g.notice.empty()) t["notice"] = g.notice;
    j["pairwise"].push_back(t);
  }
  j["notices"] = a.notices;
  return j.dump(2) + "\n";
}

std::string plot_json(const Analysis& a) {
  ordered_json j;
  ordered_json dist = ordered_json::array();
  for (const auto& [group, profiles] : a.unit_profiles) {
    for (FocusCondition cond : kAllConditions) {
      for (ISType t : kAllIsTypes) {
        std::vector<double> values;
        for (const auto& p : profiles) {
          if (p.condition == cond && p.n_categorised > 0) values.push_back(p.proportion(t));
        }
        if (values.empty()) continue;
        dist.push_back({{"group", group},
                        {"condition", label(cond)},
                        {"is_type", label(t)},
                        {"n_units", values.size()},
                        {"q1", *quantile(values, 0.25)},
                        {"median", *quantile(values, 0.5)},
                        {"q3", *quantile(values, 0.75)}});
      }
    }
  }
  j["is_type_distribution"] = {{"unit", "run (VLM) or participant (human)"}, {"series", dist}};

  ordered_json deltas = ordered_json::array();
  for (const auto& [group, values] : a.unit_deltas) {
    deltas.push_back({{"group", group}, {"median", number_or_null(median(values))},
                      {"values", values}});
  }
  j["topicalisation_delta"] = {{"definition", "P_topic(SUBJ_FOC) - P_topic(OBJ_FOC)"},
                               {"series", deltas}};

  ordered_json indef = ordered_json::array();
  for (const auto& [group, conds] : a.unit_indefiniteness) {
    for (const auto& [cond, values] : conds) {
      indef.push_back({{"group", group},
                       {"condition", label(cond)},
                       {"median", number_or_null(median(values))},
                       {"values", values}});
    }
  }
  j["focus_indefiniteness"] = {{"series", indef}};
  return j.dump(2) + "\n";
}

namespace {

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> width(rows_[0].size(), 0);
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::string out;
    for (std::size_t n = 0; n < rows_.size(); ++n) {
      std::string line;
      for (std::size_t i = 0; i < rows_[n].size(); ++i) {
        if (i > 0) line += "  ";
        std::string cell = rows_[n][i];
        cell.resize(width[i], ' ');
        line += cell;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + '\n';
      if (n == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w;
        out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

std::string render(const Analysis& a, const std::map<std::string, int>* clusters) {
  std::string out;
  out += "IS-type distribution (share of categorised responses)\n\n";
  std::vector<std::string> header{"source", "condition"};
  for (ISType t : kAllIsTypes) header.emplace_back(label(t));
  header.emplace_back("n");
  header.emplace_back("excluded");
  Table dist(header);
  for (const auto& p : a.table) {
    std::vector<std::string> row{p.source_id, std::string(label(p.condition))};
    for (ISType t : kAllIsTypes) row.push_back(text::fixed(p.proportion(t)));
    row.push_back(std::to_string(p.n_categorised));
    row.push_back(std::to_string(p.n_excluded));
    dist.add(row);
  }
  out += dist.str();

  out += "\nTopicalisation\n\n";
  Table topic({"source", "P_topic OBJ_FOC", "P_topic SUBJ_FOC", "delta"});
  for (const auto& d : a.pooled_deltas) {
    topic.add({d.source_id, text::fixed(d.p_topic_obj), text::fixed(d.p_topic_subj),
               text::fixed(d.delta)});
  }
  out += topic.str();

  out += "\nIndefinite preverbal Focus NPs (median over units)\n\n";
  Table indef({"group", "SUBJ_FOC", "OBJ_FOC", "pairs", "p_bonf", "direction"});
  if (!a.pairwise.empty()) {
    for (const auto& g : a.pairwise) {
      indef.add({g.group, opt_fixed(g.median_subj), opt_fixed(g.median_obj),
                 std::to_string(g.n_pairs), opt_fixed(g.p_bonf), g.direction});
    }
  } else {
    for (const auto& [group, conds] : a.unit_indefiniteness) {
      auto get = [&](FocusCondition c) {
        auto it = conds.find(c);
        return it == conds.end() ? std::optional<double>{} : median(it->second);
      };
      indef.add({group, opt_fixed(get(FocusCondition::kSubjectFocus)),
                 opt_fixed(get(FocusCondition::kObjectFocus)), "0", "n/a", "n/a"});
    }
  }
  out += indef.str();

  if (a.omnibus) {
    out += "\nKruskal-Wallis over " + std::to_string(a.omnibus_groups.size()) +
           " group/condition cells: H=" + text::fixed(a.omnibus->statistic) +
           ", df=" + text::fixed(a.omnibus->df, 0) + ", p=" + text::fixed(a.omnibus->p_value) +
           "\n";
  }

  if (clusters) {
    out += "\nCluster assignments\n\n";
    Table ct({"source", "cluster"});
    for (const auto& [id, c] : *clusters) ct.add({id, std::to_string(c)});
    out += ct.str();
  }

  if (!a.notices.empty()) {
    out += "\nNotices\n";
    for (const auto& n : a.notices) out += "  " + n + "\n";
  }
  return out;
}

}  // namespace fokusz::report
