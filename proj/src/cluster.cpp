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

#include "fokusz/cluster.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fokusz/error.hpp"
#include "fokusz/random.hpp"
#include "fokusz/text.hpp"
#include "json.hpp"

namespace fokusz::cluster {

std::vector<StrategyVector> build_vectors(std::span<const metrics::RunProfile> profiles) {
  std::map<std::string, StrategyVector> by_source;
  for (const auto& p : metrics::pool_runs(profiles)) {
    auto& v = by_source[p.source_id];
    v.source_id = p.source_id;
    if (p.n_categorised == 0) continue;
    for (ISType t : kAllIsTypes) v.values[slot(p.condition, t)] = p.proportion(t);
  }
  std::vector<StrategyVector> out;
  for (auto& [id, v] : by_source) out.push_back(std::move(v));
  return out;
}

std::vector<Point> to_points(std::span<const StrategyVector> vectors) {
  std::vector<Point> out;
  for (const auto& v : vectors) out.push_back({v.source_id, {v.values.begin(), v.values.end()}});
  return out;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct Fit {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> history;
};

Matrix seed_plus_plus(const Matrix& x, int k, Rng& rng) {
  Matrix centers;
  centers.push_back(x[rng.below(x.size())]);
  std::vector<double> d2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d2[i] = sq_dist(x[i], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total <= 0.0) {
      // every point coincides with a centre already
      pick = rng.below(x.size());
    } else {
      double target = rng.uniform() * total;
      double acc = 0.0;
      pick = x.size() - 1;
      for (std::size_t i = 0; i < x.size(); ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(x[pick]);
    for (std::size_t i = 0; i < x.size(); ++i) d2[i] = std::min(d2[i], sq_dist(x[i], centers.back()));
  }
  return centers;
}

void assign(const Matrix& x, const Matrix& centers, std::vector<int>& labels,
            std::vector<double>& cost, bool parallel) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  auto one = [&](std::ptrdiff_t i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d = sq_dist(x[static_cast<std::size_t>(i)], centers[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    cost[static_cast<std::size_t>(i)] = best_d;
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  }
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double d : v) s += d;
  return s;
}

Fit lloyd(const Matrix& x, int k, const KMeansOptions& opt, std::uint64_t stream_seed,
          bool parallel_assign) {
  Rng rng(stream_seed);
  const std::size_t dims = x.front().size();
  Fit fit;
  fit.centroids = seed_plus_plus(x, k, rng);
  fit.labels.assign(x.size(), -1);
  std::vector<double> cost(x.size());
  assign(x, fit.centroids, fit.labels, cost, parallel_assign);
  fit.history.push_back(sum(cost));

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    Matrix next(static_cast<std::size_t>(k), std::vector<double>(dims, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto c = static_cast<std::size_t>(fit.labels[i]);
      ++counts[c];
      for (std::size_t d = 0; d < dims; ++d) next[c][d] += x[i][d];
    }
    for (std::size_t c = 0; c < next.size(); ++c) {
      if (counts[c] == 0) {
        // empty cluster: move it onto the worst-served point
        auto worst = std::max_element(cost.begin(), cost.end()) - cost.begin();
        next[c] = x[static_cast<std::size_t>(worst)];
        cost[static_cast<std::size_t>(worst)] = 0.0;
        continue;
      }
      for (double& v : next[c]) v /= static_cast<double>(counts[c]);
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < next.size(); ++c) {
      shift = std::max(shift, sq_dist(next[c], fit.centroids[c]));
    }
    fit.centroids = std::move(next);
    std::vector<int> before = fit.labels;
    assign(x, fit.centroids, fit.labels, cost, parallel_assign);
    fit.history.push_back(sum(cost));
    if (shift <= opt.tol || before == fit.labels) break;
  }
  fit.inertia = sum(cost);
  return fit;
}

}  // namespace

Clustering kmeans(std::span<const Point> points, const KMeansOptions& opt, Exec exec) {
  if (opt.k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
  if (static_cast<std::size_t>(opt.k) > points.size()) {
    throw Error(ErrorKind::kKTooLarge, "k = " + std::to_string(opt.k) + " exceeds " +
                                           std::to_string(points.size()) + " points");
  }
  if (opt.restarts < 1) throw Error(ErrorKind::kInvalidArgument, "restarts must be at least 1");

  std::vector<const Point*> order;
  for (const auto& p : points) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const Point* a, const Point* b) {
    return a->id != b->id ? a->id < b->id : a->x < b->x;
  });
  Matrix x;
  for (const Point* p : order) {
    if (p->x.size() != order.front()->x.size()) {
      throw Error(ErrorKind::kInvalidArgument, "points differ in dimension");
    }
    x.push_back(p->x);
  }

  std::vector<Fit> fits(static_cast<std::size_t>(opt.restarts));
  const bool parallel = exec == Exec::kParallel;
  if (parallel && opt.restarts == 1) {
    fits[0] = lloyd(x, opt.k, opt, derive_seed(opt.seed, 0), true);
  } else if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < opt.restarts; ++r) {
      fits[static_cast<std::size_t>(r)] =
          lloyd(x, opt.k, opt, derive_seed(opt.seed, static_cast<std::uint64_t>(r)), false);
    }
  } else {
    for (int r = 0; r < opt.restarts; ++r) {
      fits[static_cast<std::size_t>(r)] =
          lloyd(x, opt.k, opt, derive_seed(opt.seed, static_cast<std::uint64_t>(r)), false);
    }
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < fits.size(); ++r) {
    if (fits[r].inertia < fits[best].inertia) best = r;
  }
  Fit& f = fits[best];

  // renumber clusters by first appearance in id order
  std::vector<int> remap(static_cast<std::size_t>(opt.k), -1);
  int next = 0;
  for (int l : f.labels) {
    if (remap[static_cast<std::size_t>(l)] < 0) remap[static_cast<std::size_t>(l)] = next++;
  }
  for (auto& r : remap) {
    if (r < 0) r = next++;
  }

  Clustering out;
  out.k = opt.k;
  out.inertia = f.inertia;
  out.inertia_history = f.history;
  out.best_restart = static_cast<int>(best);
  out.centroids.assign(static_cast<std::size_t>(opt.k), {});
  out.sizes.assign(static_cast<std::size_t>(opt.k), 0);
  for (std::size_t c = 0; c < f.centroids.size(); ++c) {
    out.centroids[static_cast<std::size_t>(remap[c])] = f.centroids[c];
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    int c = remap[static_cast<std::size_t>(f.labels[i])];
    out.assignment[order[i]->id] = c;
    ++out.sizes[static_cast<std::size_t>(c)];
  }
  return out;
}

ElbowResult elbow(std::span<const Point> points, int k_min, int k_max,
                  const KMeansOptions& base, Exec exec) {
  if (k_min < 1 || k_max < k_min || k_max - k_min + 1 < 3) {
    throw Error(ErrorKind::kRangeTooSmall, "the elbow needs at least three consecutive k values");
  }
  ElbowResult res;
  for (int k = k_min; k <= k_max; ++k) {
    KMeansOptions opt = base;
    opt.k = k;
    res.ks.push_back(k);
    res.inertia.push_back(kmeans(points, opt, exec).inertia);
  }
  // Curvature of log inertia: a knee is a sharp change in the relative drop,
  // which does not depend on the overall scale of the data.
  double floor = std::max(res.inertia.front() * 1e-12, std::numeric_limits<double>::min());
  std::vector<double> log_inertia;
  for (double v : res.inertia) log_inertia.push_back(std::log(std::max(v, floor)));
  res.curvature.assign(res.ks.size(), 0.0);
  std::size_t best = 1;
  for (std::size_t i = 1; i + 1 < res.ks.size(); ++i) {
    res.curvature[i] = log_inertia[i - 1] - 2.0 * log_inertia[i] + log_inertia[i + 1];
    if (res.curvature[i] > res.curvature[best]) best = i;
  }
  res.chosen_k = res.ks[best];
  res.low_confidence = !(res.curvature[best] >= kElbowConfidence);
  return res;
}

std::string assignments_csv(const Clustering& c) {
  std::string out = "source_id,cluster\n";
  for (const auto& [id, cluster] : c.assignment) {
    out += text::csv_escape(id) + ',' + std::to_string(cluster) + '\n';
  }
  return out;
}

std::string curve_json(const ElbowResult& e) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < e.ks.size(); ++i) {
    arr.push_back({{"k", e.ks[i]}, {"inertia", e.inertia[i]}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace fokusz::cluster
