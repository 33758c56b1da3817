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

#include "fokusz/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fokusz/error.hpp"

namespace fokusz::stats {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;
constexpr double kTiny = 1e-300;

// Series for P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "incomplete gamma needs a > 0 and x >= 0");
  }
}

double log_poisson(double mean, double j) {
  return -mean + j * std::log(mean) - std::lgamma(j + 1.0);
}

// Sums weight_j * term(j) outward from the Poisson mode until the covered mass
// exceeds 1 - 1e-12.
template <typename Term>
double poisson_mixture(double mean, Term term) {
  if (mean <= 0.0) return term(0.0);
  double mode = std::floor(mean);
  double covered = 0.0;
  double total = 0.0;
  double lo = mode;
  double hi = mode + 1.0;
  bool lo_done = false;
  bool hi_done = false;
  while (covered < 1.0 - 1e-12 && !(lo_done && hi_done)) {
    if (!lo_done) {
      double w = std::exp(log_poisson(mean, lo));
      covered += w;
      total += w * term(lo);
      lo -= 1.0;
      if (lo < 0.0) lo_done = true;
    }
    if (!hi_done) {
      double w = std::exp(log_poisson(mean, hi));
      covered += w;
      total += w * term(hi);
      hi += 1.0;
      // far in the upper tail with nothing left to add
      if (w == 0.0 && hi > mean + 1.0) hi_done = true;
    }
  }
  return total;
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::clamp(gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(1.0 - gamma_q_fraction(a, x), 0.0, 1.0);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double chi2_cdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  return gamma_p(df / 2.0, x / 2.0);
}

double chi2_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return gamma_q(df / 2.0, x / 2.0);
}

double chi2_isf(double upper_tail, double df) {
  if (!(upper_tail > 0.0 && upper_tail < 1.0) || !(df > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "chi2_isf needs 0 < p < 1 and df > 0");
  }
  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (chi2_sf(hi, df) > upper_tail) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (chi2_sf(mid, df) > upper_tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double noncentral_chi2_cdf(double x, double df, double lambda) {
  if (!(df > 0.0) || !(lambda >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "noncentral chi2 needs df > 0 and lambda >= 0");
  }
  if (x <= 0.0) return 0.0;
  double v = poisson_mixture(lambda / 2.0, [&](double j) { return chi2_cdf(x, df + 2.0 * j); });
  return std::clamp(v, 0.0, 1.0);
}

double noncentral_chi2_sf(double x, double df, double lambda) {
  if (!(df > 0.0) || !(lambda >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "noncentral chi2 needs df > 0 and lambda >= 0");
  }
  if (x <= 0.0) return 1.0;
  double v = poisson_mixture(lambda / 2.0, [&](double j) { return chi2_sf(x, df + 2.0 * j); });
  return std::clamp(v, 0.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace fokusz::stats
