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

#include "fokusz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fokusz/error.hpp"

namespace fokusz::stats {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols,
                                   std::vector<std::uint64_t> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ < 2 || cols_ < 2) {
    throw Error(ErrorKind::kDegenerateTable, "a contingency table needs at least 2x2 cells");
  }
  if (cells_.size() != rows_ * cols_) {
    throw Error(ErrorKind::kInvalidArgument, "cell count does not match dimensions");
  }
  total_ = std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0});
}

ContingencyTable ContingencyTable::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  if (rows.empty()) throw Error(ErrorKind::kDegenerateTable, "empty table");
  std::size_t cols = rows.front().size();
  std::vector<std::uint64_t> cells;
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorKind::kInvalidArgument, "ragged table rows");
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return ContingencyTable(rows.size(), cols, std::move(cells));
}

std::uint64_t ContingencyTable::row_total(std::size_t r) const {
  std::uint64_t s = 0;
  for (std::size_t c = 0; c < cols_; ++c) s += at(r, c);
  return s;
}

std::uint64_t ContingencyTable::col_total(std::size_t c) const {
  std::uint64_t s = 0;
  for (std::size_t r = 0; r < rows_; ++r) s += at(r, c);
  return s;
}

ContingencyTable ContingencyTable::scaled(std::uint64_t factor) const {
  std::vector<std::uint64_t> cells = cells_;
  for (auto& c : cells) c *= factor;
  return ContingencyTable(rows_, cols_, std::move(cells));
}

std::string_view label(Method m) {
  switch (m) {
    case Method::kChiSquare: return "chi_square";
    case Method::kKruskalWallis: return "kruskal_wallis";
    case Method::kKruskalWallisPermutation: return "kruskal_wallis_permutation";
    case Method::kWilcoxonExact: return "wilcoxon_exact";
    case Method::kWilcoxonNormal: return "wilcoxon_normal";
  }
  return "?";
}

TestResult chi_square(const ContingencyTable& t) {
  if (t.total() == 0) throw Error(ErrorKind::kDegenerateTable, "table total is zero");
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (t.row_total(r) == 0) {
      throw Error(ErrorKind::kDegenerateTable, "row " + std::to_string(r) + " is all zero");
    }
  }
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (t.col_total(c) == 0) {
      throw Error(ErrorKind::kDegenerateTable, "column " + std::to_string(c) + " is all zero");
    }
  }
  const double n = static_cast<double>(t.total());
  double stat = 0.0;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      double expected = static_cast<double>(t.row_total(r)) *
                        static_cast<double>(t.col_total(c)) / n;
      double diff = static_cast<double>(t.at(r, c)) - expected;
      stat += diff * diff / expected;
    }
  }
  TestResult res;
  res.method = Method::kChiSquare;
  res.statistic = stat;
  res.df = static_cast<double>((t.rows() - 1) * (t.cols() - 1));
  res.p_value = chi2_sf(stat, res.df);
  return res;
}

double cramers_v(const ContingencyTable& t) {
  TestResult chi = chi_square(t);
  double k = static_cast<double>(std::min(t.rows(), t.cols()));
  double v = std::sqrt(chi.statistic / (static_cast<double>(t.total()) * (k - 1.0)));
  return std::clamp(v, 0.0, 1.0);
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Sum over tie groups of (t^3 - t).
double tie_term(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    sum += t * t * t - t;
    i = j + 1;
  }
  return sum;
}

struct KwSetup {
  std::vector<double> pooled;
  std::vector<double> ranks;
  std::vector<std::size_t> sizes;
  double n = 0.0;
  double correction = 1.0;
  bool all_tied = false;
};

KwSetup kw_setup(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw Error(ErrorKind::kTooFewGroups, "Kruskal-Wallis needs at least two groups");
  }
  KwSetup s;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorKind::kInvalidArgument, "empty group");
    s.sizes.push_back(g.size());
    s.pooled.insert(s.pooled.end(), g.begin(), g.end());
  }
  if (s.pooled.size() < 3) {
    throw Error(ErrorKind::kTooFewGroups, "Kruskal-Wallis needs at least three observations");
  }
  s.n = static_cast<double>(s.pooled.size());
  s.ranks = midranks(s.pooled);
  s.correction = 1.0 - tie_term(s.pooled) / (s.n * s.n * s.n - s.n);
  s.all_tied = s.correction <= 0.0;
  return s;
}

double kw_statistic(const KwSetup& s, std::span<const double> rank_sums) {
  double acc = 0.0;
  for (std::size_t g = 0; g < s.sizes.size(); ++g) {
    acc += rank_sums[g] * rank_sums[g] / static_cast<double>(s.sizes[g]);
  }
  double h = 12.0 / (s.n * (s.n + 1.0)) * acc - 3.0 * (s.n + 1.0);
  return std::max(0.0, h / s.correction);
}

std::vector<double> observed_rank_sums(const KwSetup& s) {
  std::vector<double> sums(s.sizes.size(), 0.0);
  std::size_t pos = 0;
  for (std::size_t g = 0; g < s.sizes.size(); ++g) {
    for (std::size_t i = 0; i < s.sizes[g]; ++i) sums[g] += s.ranks[pos++];
  }
  return sums;
}

double multinomial(std::span<const std::size_t> sizes) {
  double total = 0.0;
  double log_count = 0.0;
  for (auto k : sizes) {
    total += static_cast<double>(k);
    log_count -= std::lgamma(static_cast<double>(k) + 1.0);
  }
  return std::exp(log_count + std::lgamma(total + 1.0));
}

// Enumerates every split of the pooled ranks into groups of the given sizes.
class Relabeller {
 public:
  Relabeller(const KwSetup& s, double threshold) : s_(s), threshold_(threshold) {
    used_.assign(s.pooled.size(), false);
    sums_.assign(s.sizes.size(), 0.0);
  }

  void run() { fill(0, 0, 0); }
  std::uint64_t total() const { return total_; }
  std::uint64_t extreme() const { return extreme_; }

 private:
  void fill(std::size_t group, std::size_t start, std::size_t taken) {
    if (group + 1 == s_.sizes.size()) {
      double last = 0.0;
      for (std::size_t i = 0; i < used_.size(); ++i) {
        if (!used_[i]) last += s_.ranks[i];
      }
      sums_[group] = last;
      ++total_;
      if (kw_statistic(s_, sums_) >= threshold_) ++extreme_;
      return;
    }
    if (taken == s_.sizes[group]) {
      fill(group + 1, 0, 0);
      return;
    }
    for (std::size_t i = start; i < used_.size(); ++i) {
      if (used_[i]) continue;
      used_[i] = true;
      sums_[group] += s_.ranks[i];
      fill(group, i + 1, taken + 1);
      sums_[group] -= s_.ranks[i];
      used_[i] = false;
    }
  }

  const KwSetup& s_;
  double threshold_;
  std::vector<bool> used_;
  std::vector<double> sums_;
  std::uint64_t total_ = 0;
  std::uint64_t extreme_ = 0;
};

}  // namespace

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  KwSetup s = kw_setup(groups);
  TestResult res;
  res.method = Method::kKruskalWallis;
  res.df = static_cast<double>(groups.size() - 1);
  if (s.all_tied) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  res.statistic = kw_statistic(s, observed_rank_sums(s));
  res.p_value = chi2_sf(res.statistic, res.df);
  return res;
}

TestResult kruskal_wallis_permutation(const std::vector<std::vector<double>>& groups,
                                      std::uint64_t max_assignments) {
  KwSetup s = kw_setup(groups);
  TestResult res;
  res.method = Method::kKruskalWallisPermutation;
  res.df = static_cast<double>(groups.size() - 1);
  if (s.all_tied) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  if (multinomial(s.sizes) > static_cast<double>(max_assignments)) {
    throw Error(ErrorKind::kInvalidArgument, "too many relabellings for the permutation test");
  }
  res.statistic = kw_statistic(s, observed_rank_sums(s));
  Relabeller enumerate(s, res.statistic - 1e-9 * std::max(1.0, res.statistic));
  enumerate.run();
  res.p_value = static_cast<double>(enumerate.extreme()) / static_cast<double>(enumerate.total());
  return res;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "paired samples must have equal, non-zero length");
  }
  std::vector<double> abs_diff;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    if (d == 0.0) continue;
    abs_diff.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t m = abs_diff.size();
  if (m == 0) throw Error(ErrorKind::kAllDifferencesZero, "every paired difference is zero");

  std::vector<double> ranks = midranks(abs_diff);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (positive[i]) w_plus += ranks[i];
  }

  TestResult res;
  res.statistic = w_plus;
  res.df = static_cast<double>(m);
  if (m <= kWilcoxonExactLimit) {
    // Midranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of the doubled statistic is a subset-sum count.
    std::vector<int> doubled(m);
    int max_sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      max_sum += doubled[i];
    }
    std::vector<double> ways(static_cast<std::size_t>(max_sum) + 1, 0.0);
    ways[0] = 1.0;
    int reach = 0;
    for (int r : doubled) {
      for (int s = reach; s >= 0; --s) {
        if (ways[static_cast<std::size_t>(s)] != 0.0) {
          ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
        }
      }
      reach += r;
    }
    const int observed = static_cast<int>(std::lround(2.0 * w_plus));
    double total = std::ldexp(1.0, static_cast<int>(m));
    double lower = 0.0;
    double upper = 0.0;
    for (int s = 0; s <= max_sum; ++s) {
      if (s <= observed) lower += ways[static_cast<std::size_t>(s)];
      if (s >= observed) upper += ways[static_cast<std::size_t>(s)];
    }
    res.method = Method::kWilcoxonExact;
    res.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    return res;
  }

  const double md = static_cast<double>(m);
  double mean = md * (md + 1.0) / 4.0;
  double var = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 - tie_term(abs_diff) / 48.0;
  res.method = Method::kWilcoxonNormal;
  if (var <= 0.0) {
    res.p_value = 1.0;
    return res;
  }
  double z = std::max(0.0, std::fabs(w_plus - mean) - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, 2.0 * normal_sf(z));
  return res;
}

std::vector<double> bonferroni(std::span<const double> p_values) {
  std::vector<double> out;
  out.reserve(p_values.size());
  const double m = static_cast<double>(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "p-values must lie in [0, 1]");
    }
    out.push_back(std::min(1.0, p * m));
  }
  return out;
}

double chi2_power(double effect_w, int df, double alpha, double n) {
  double critical = chi2_isf(alpha, static_cast<double>(df));
  return noncentral_chi2_sf(critical, static_cast<double>(df), n * effect_w * effect_w);
}

PowerResult required_n(double effect_w, int df, double alpha, double target_power,
                       std::uint64_t cap) {
  if (!(effect_w >= 0.0) || df < 1 || !(alpha > 0.0 && alpha < 1.0) ||
      !(target_power > alpha && target_power < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "need w >= 0, df >= 1, 0 < alpha < 1 and alpha < power < 1");
  }
  if (effect_w == 0.0) {
    throw Error(ErrorKind::kEffectTooSmall, "effect size is zero; no sample size suffices");
  }
  const double critical = chi2_isf(alpha, static_cast<double>(df));
  auto power_at = [&](std::uint64_t n) {
    return noncentral_chi2_sf(critical, static_cast<double>(df),
                              static_cast<double>(n) * effect_w * effect_w);
  };

  PowerResult res{effect_w, df, alpha, target_power, 1, power_at(1)};
  if (res.achieved_power >= target_power) return res;

  std::uint64_t lo = 1;  // power(lo) < target
  std::uint64_t hi = 2;
  while (power_at(hi) < target_power) {
    lo = hi;
    if (hi > cap / 2) {
      throw Error(ErrorKind::kEffectTooSmall,
                  "required sample size exceeds " + std::to_string(cap));
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (power_at(mid) >= target_power) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (hi > cap) {
    throw Error(ErrorKind::kEffectTooSmall, "required sample size exceeds " + std::to_string(cap));
  }
  res.required_n = hi;
  res.achieved_power = power_at(hi);
  return res;
}

}  // namespace fokusz::stats
