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

// Strategy vectors and K-means clustering of production profiles.

#ifndef FOKUSZ_CLUSTER_HPP_
#define FOKUSZ_CLUSTER_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fokusz/metrics.hpp"
#include "fokusz/parallel.hpp"

namespace fokusz::cluster {

inline constexpr std::size_t kStrategyDims = 2 * kNumIsTypes;

// Layout: object-focus {default, preVF, Top-preVF, Top-postVF, error}, then
// the same five for subject-focus.
constexpr std::size_t slot(FocusCondition c, ISType t) {
  return index_of(c) * kNumIsTypes + index_of(t);
}

struct StrategyVector {
  std::string source_id;
  std::array<double, kStrategyDims> values{};
};

// Pools each source's runs per condition and converts counts to proportions.
// A condition without categorised responses contributes five zeros.
std::vector<StrategyVector> build_vectors(std::span<const metrics::RunProfile> profiles);

struct Point {
  std::string id;
  std::vector<double> x;
};

std::vector<Point> to_points(std::span<const StrategyVector> vectors);

struct KMeansOptions {
  int k = 3;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iter = 300;
  double tol = 1e-10;  // stop when no centroid moves more than this (squared)
};

struct Clustering {
  int k = 0;
  std::map<std::string, int> assignment;  // point id -> cluster
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> sizes;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // after each Lloyd iteration, best restart
  int best_restart = 0;
};

// Lloyd iterations from k-means++ seeds, best inertia over restarts. Points
// are processed in id order, so the result does not depend on input order.
// Clusters are numbered by first appearance in id order.
Clustering kmeans(std::span<const Point> points, const KMeansOptions& options,
                  Exec exec = Exec::kParallel);

struct ElbowResult {
  int chosen_k = 0;
  std::vector<int> ks;
  std::vector<double> inertia;
  std::vector<double> curvature;  // of log inertia, aligned with ks; 0 at the ends
  bool low_confidence = false;
};

// Curvature below this (a change of less than about 1.5x in the ratio of
// successive inertias) flags the choice as low confidence.
inline constexpr double kElbowConfidence = 0.4;

// Fits every k in [k_min, k_max] and picks the k with the largest second
// difference of log inertia. RangeTooSmall for fewer than three ks.
ElbowResult elbow(std::span<const Point> points, int k_min, int k_max,
                  const KMeansOptions& base, Exec exec = Exec::kParallel);

std::string assignments_csv(const Clustering& c);
std::string curve_json(const ElbowResult& e);

}  // namespace fokusz::cluster

#endif  // FOKUSZ_CLUSTER_HPP_
