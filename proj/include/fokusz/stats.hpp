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

// Hypothesis tests, effect size and sample-size solver.

#ifndef FOKUSZ_STATS_HPP_
#define FOKUSZ_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fokusz/distributions.hpp"

namespace fokusz::stats {

// r x c table of non-negative counts, r, c >= 2.
class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> cells);
  static ContingencyTable from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  std::uint64_t total() const { return total_; }
  std::uint64_t row_total(std::size_t r) const;
  std::uint64_t col_total(std::size_t c) const;
  ContingencyTable scaled(std::uint64_t factor) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> cells_;
  std::uint64_t total_ = 0;
};

enum class Method {
  kChiSquare,
  kKruskalWallis,
  kKruskalWallisPermutation,
  kWilcoxonExact,
  kWilcoxonNormal,
};

std::string_view label(Method m);

struct TestResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  Method method = Method::kChiSquare;
};

// Pearson statistic against independence. DegenerateTable on an empty table
// or an all-zero row/column.
TestResult chi_square(const ContingencyTable& table);

// sqrt(chi2 / (n * (k - 1))), k = min(rows, cols).
double cramers_v(const ContingencyTable& table);

// H with tie correction, p from chi-square with (groups - 1) df. When every
// value is tied, H is 0 and p is 1.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Same statistic; p is the exact share of group relabellings with H at least
// as large. Intended for small samples (refuses more than `max_assignments`).
TestResult kruskal_wallis_permutation(const std::vector<std::vector<double>>& groups,
                                      std::uint64_t max_assignments = 5'000'000);

inline constexpr std::size_t kWilcoxonExactLimit = 25;

// Paired signed-rank test on x - y. Zero differences are dropped; the
// statistic is the rank sum of positive differences. Exact two-sided p for up
// to 25 non-zero pairs, normal approximation (tie-corrected variance,
// continuity correction) beyond.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

// min(1, p * m), order preserved.
std::vector<double> bonferroni(std::span<const double> p_values);

// Midranks of `values` (1-based), ties averaged.
std::vector<double> midranks(std::span<const double> values);

struct PowerResult {
  double effect_w = 0.0;
  int df = 1;
  double alpha = 0.05;
  double target_power = 0.8;
  std::uint64_t required_n = 0;
  double achieved_power = 0.0;
};

inline constexpr std::uint64_t kDefaultNCap = 10'000'000;

// Goodness-of-fit chi-square power at sample size n:
// P(noncentral chi2(df, n w^2) > critical value at alpha).
double chi2_power(double effect_w, int df, double alpha, double n);

// Minimal integer n reaching target_power, by doubling then bisection.
// EffectTooSmall when n would exceed `cap` (or w is 0).
PowerResult required_n(double effect_w, int df, double alpha, double target_power,
                       std::uint64_t cap = kDefaultNCap);

}  // namespace fokusz::stats

#endif  // FOKUSZ_STATS_HPP_
