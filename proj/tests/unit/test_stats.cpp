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
#include <numeric>
#include <random>

#include "fokusz/distributions.hpp"
#include "fokusz/error.hpp"
#include "fokusz/stats.hpp"

namespace fokusz::stats {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

TEST(Stats, ChiSquareFrozen) {
  auto t = ContingencyTable::from_rows({{8, 2}, {2, 8}});
  auto r = chi_square(t);
  EXPECT_NEAR(r.statistic, 7.2, 1e-12);
  EXPECT_EQ(r.df, 1.0);
  EXPECT_NEAR(r.p_value, 0.0072903580915356595, 1e-12);
  EXPECT_NEAR(chi_square(ContingencyTable::from_rows({{10, 0}, {0, 10}})).statistic, 20.0, 1e-12);
  EXPECT_NEAR(cramers_v(ContingencyTable::from_rows({{10, 0}, {0, 10}})), 1.0, 1e-12);
  EXPECT_NEAR(cramers_v(ContingencyTable::from_rows({{5, 5}, {5, 5}})), 0.0, 1e-12);
}

TEST(Stats, ChiSquareDegenerate) {
  EXPECT_EQ(kind_of([] { chi_square(ContingencyTable::from_rows({{0, 0}, {3, 4}})); }),
            ErrorKind::kDegenerateTable);
  EXPECT_EQ(kind_of([] { chi_square(ContingencyTable::from_rows({{0, 2}, {0, 4}})); }),
            ErrorKind::kDegenerateTable);
}

// Closed form n(ad - bc)^2 / (r1 r2 c1 c2) over every small 2x2 table.
TEST(Stats, ChiSquareTwoByTwoSweep) {
  for (std::uint64_t a = 0; a <= 6; ++a)
    for (std::uint64_t b = 0; b <= 6; ++b)
      for (std::uint64_t c = 0; c <= 6; ++c)
        for (std::uint64_t d = 0; d <= 6; ++d) {
          double r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
          if (!r1 || !r2 || !c1 || !c2) continue;
          double n = r1 + r2;
          double diff = static_cast<double>(a) * d - static_cast<double>(b) * c;
          double want = n * diff * diff / (r1 * r2 * c1 * c2);
          auto t = ContingencyTable::from_rows({{a, b}, {c, d}});
          EXPECT_NEAR(chi_square(t).statistic, want, 1e-9 * (1 + want));
          EXPECT_NEAR(cramers_v(t), std::sqrt(want / n), 1e-9);
        }
}

TEST(Stats, ChiSquareScaleInvariantV) {
  auto t = ContingencyTable::from_rows({{12, 5, 3}, {4, 9, 7}});
  auto s = t.scaled(7);
  EXPECT_NEAR(cramers_v(t), cramers_v(s), 1e-12);
  EXPECT_NEAR(chi_square(s).statistic, 7 * chi_square(t).statistic, 1e-9);
}

TEST(Stats, KruskalWallisFrozen) {
  auto r = kruskal_wallis({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  EXPECT_NEAR(r.statistic, 7.2, 1e-12);
  EXPECT_EQ(r.df, 2.0);
  EXPECT_NEAR(r.p_value, 0.02732372244729252, 1e-12);
}

TEST(Stats, KruskalWallisTiesAndErrors) {
  auto r = kruskal_wallis({{1, 1}, {1, 1, 1}});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(kind_of([] { kruskal_wallis({{1, 2, 3}}); }), ErrorKind::kTooFewGroups);
}

double h_statistic(const std::vector<std::vector<double>>& g) {
  std::vector<double> all;
  for (const auto& x : g) all.insert(all.end(), x.begin(), x.end());
  auto ranks = midranks(all);
  double n = static_cast<double>(all.size());
  double h = 0;
  std::size_t at = 0;
  for (const auto& x : g) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += ranks[at++];
    h += s * s / static_cast<double>(x.size());
  }
  h = 12.0 / (n * (n + 1)) * h - 3 * (n + 1);
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  double corr = 1 - ties / (n * n * n - n);
  return corr > 0 ? h / corr : 0.0;
}

// Independent oracle: enumerate all assignments of the pooled values to two
// or three labelled groups of the given sizes.
TEST(Stats, KruskalWallisPermutationOracle) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 15; ++round) {
    std::vector<std::size_t> sizes = {2 + rng() % 3, 2 + rng() % 2, 2 + rng() % 2};
    std::vector<std::vector<double>> g;
    std::vector<double> pool;
    for (auto s : sizes) {
      g.emplace_back();
      for (std::size_t i = 0; i < s; ++i) {
        double v = static_cast<double>(rng() % 6);
        g.back().push_back(v);
        pool.push_back(v);
      }
    }
    double observed = h_statistic(g);
    auto r = kruskal_wallis(g);
    EXPECT_NEAR(r.statistic, observed, 1e-9);

    std::vector<int> labels;
    for (std::size_t k = 0; k < sizes.size(); ++k) labels.insert(labels.end(), sizes[k], k);
    std::uint64_t total = 0, extreme = 0;
    do {
      std::vector<std::vector<double>> h(sizes.size());
      for (std::size_t i = 0; i < pool.size(); ++i) h[labels[i]].push_back(pool[i]);
      ++total;
      if (h_statistic(h) >= observed - 1e-9) ++extreme;
    } while (std::next_permutation(labels.begin(), labels.end()));
    auto p = kruskal_wallis_permutation(g);
    EXPECT_NEAR(p.p_value, static_cast<double>(extreme) / static_cast<double>(total), 1e-12);
    EXPECT_NEAR(p.statistic, observed, 1e-9);
  }
}

TEST(Stats, WilcoxonFrozen) {
  std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 3, 4, 5, 6};
  auto r = wilcoxon_signed_rank(x, y);
  EXPECT_NEAR(r.p_value, 0.0625, 1e-12);
  EXPECT_EQ(r.method, Method::kWilcoxonExact);
}

TEST(Stats, WilcoxonAllZero) {
  std::vector<double> x = {1, 2, 3};
  EXPECT_EQ(kind_of([&] { wilcoxon_signed_rank(x, x); }), ErrorKind::kAllDifferencesZero);
}

// Exact p against enumeration of all 2^m sign patterns over the midranks.
TEST(Stats, WilcoxonExhaustive) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    std::size_t m = 1 + rng() % 8;
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = static_cast<double>(rng() % 7);
      do {
        y[i] = static_cast<double>(rng() % 7);
      } while (y[i] == x[i]);
    }
    std::vector<double> absd(m);
    double wplus = 0;
    for (std::size_t i = 0; i < m; ++i) absd[i] = std::fabs(x[i] - y[i]);
    auto ranks = midranks(absd);
    for (std::size_t i = 0; i < m; ++i)
      if (x[i] > y[i]) wplus += ranks[i];
    double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
    double center = total / 2;
    std::uint64_t extreme = 0, patterns = 1ULL << m;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      double w = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1) w += ranks[i];
      if (std::fabs(w - center) >= std::fabs(wplus - center) - 1e-9) ++extreme;
    }
    auto r = wilcoxon_signed_rank(x, y);
    EXPECT_NEAR(r.statistic, wplus, 1e-12);
    EXPECT_NEAR(r.p_value, static_cast<double>(extreme) / static_cast<double>(patterns), 1e-12)
        << "m=" << m;
  }
}

TEST(Stats, WilcoxonNormalLargeSample) {
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i + 0.5 * (i % 3));
    y.push_back(i);
  }
  auto r = wilcoxon_signed_rank(x, y);
  EXPECT_EQ(r.method, Method::kWilcoxonNormal);
  EXPECT_LT(r.p_value, 1e-4);
}

TEST(Stats, Bonferroni) {
  std::vector<double> p = {0.01, 0.5, 0.04};
  auto b = bonferroni(p);
  EXPECT_NEAR(b[0], 0.03, 1e-15);
  EXPECT_EQ(b[1], 1.0);
  EXPECT_NEAR(b[2], 0.12, 1e-15);
  EXPECT_TRUE(bonferroni({}).empty());
}

TEST(Stats, Midranks) {
  std::vector<double> v = {3, 1, 3, 2};
  EXPECT_EQ(midranks(v), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Stats, PowerReference) {
  auto r = required_n(0.5, 1, 0.05, 0.8);
  EXPECT_LE(std::llabs(static_cast<long long>(r.required_n) - 32), 1);
  EXPECT_GE(r.achieved_power, 0.8);
}

TEST(Stats, PowerFrozenPoints) {
  struct Point {
    double w;
    int df;
    double n;
  };
  for (auto [w, df, n] : {Point{0.3, 1, 87.21}, Point{0.1, 1, 784.89}, Point{0.5, 2, 38.54},
                          Point{0.3, 4, 132.61}, Point{1.0, 1, 7.85}}) {
    auto r = required_n(w, df, 0.05, 0.8);
    EXPECT_EQ(r.required_n, static_cast<std::uint64_t>(std::ceil(n))) << w << " " << df;
  }
}

// The answer is minimal: one fewer observation misses the target.
TEST(Stats, PowerMinimality) {
  for (double w : {0.08, 0.15, 0.25, 0.4, 0.7, 1.3})
    for (int df : {1, 2, 3, 6})
      for (double target : {0.5, 0.8, 0.95}) {
        auto r = required_n(w, df, 0.05, target);
        EXPECT_GE(chi2_power(w, df, 0.05, static_cast<double>(r.required_n)), target);
        if (r.required_n > 1) {
          EXPECT_LT(chi2_power(w, df, 0.05, static_cast<double>(r.required_n - 1)), target);
        }
      }
}

TEST(Stats, PowerMonotone) {
  double prev = 0;
  for (int n = 1; n < 200; n += 3) {
    double p = chi2_power(0.3, 2, 0.05, n);
    EXPECT_GE(p, prev - 1e-12);
    prev = p;
  }
}

TEST(Stats, PowerEffectTooSmall) {
  EXPECT_EQ(kind_of([] { required_n(0.0, 1, 0.05, 0.8); }), ErrorKind::kEffectTooSmall);
  EXPECT_EQ(kind_of([] { required_n(0.001, 1, 0.05, 0.8, 1000); }), ErrorKind::kEffectTooSmall);
}

TEST(Stats, InvalidTables) {
  EXPECT_THROW(ContingencyTable(1, 2, {1, 2}), Error);
  EXPECT_THROW(ContingencyTable(2, 2, {1, 2, 3}), Error);
}

}  // namespace
}  // namespace fokusz::stats
