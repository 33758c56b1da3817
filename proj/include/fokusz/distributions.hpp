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

// Distribution kernels: regularized incomplete gamma, central and noncentral
// chi-square, standard normal.

#ifndef FOKUSZ_DISTRIBUTIONS_HPP_
#define FOKUSZ_DISTRIBUTIONS_HPP_

namespace fokusz::stats {

// P(a, x) and Q(a, x) = 1 - P(a, x), for a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi2_cdf(double x, double df);
double chi2_sf(double x, double df);
// Smallest x with chi2_sf(x, df) <= upper_tail.
double chi2_isf(double upper_tail, double df);

// Poisson(lambda/2) mixture of central chi-square distributions with df + 2j
// degrees of freedom, truncated once the neglected Poisson mass is below
// 1e-12.
double noncentral_chi2_cdf(double x, double df, double lambda);
double noncentral_chi2_sf(double x, double df, double lambda);

double normal_cdf(double z);
double normal_sf(double z);

}  // namespace fokusz::stats

#endif  // FOKUSZ_DISTRIBUTIONS_HPP_
