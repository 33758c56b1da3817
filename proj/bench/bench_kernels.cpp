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

// Serial reference path against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "fokusz/cluster.hpp"
#include "fokusz/coder.hpp"
#include "fokusz/simgen.hpp"

namespace {

using fokusz::Exec;

const std::vector<fokusz::StimulusItem>& stimuli() {
  static const auto s = fokusz::load_manifest(std::filesystem::path(FOKUSZ_DATA) / "stimuli.csv");
  return s;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? Exec::kParallel : Exec::kSerial;
}

void BM_Generate(benchmark::State& state) {
  auto profile = *fokusz::simgen::builtin_profile("vlm-aggregated");
  for (auto _ : state) {
    auto d = fokusz::simgen::generate(profile, stimuli(), state.range(0), 1, exec_of(state));
    benchmark::DoNotOptimize(d.trials.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}

void BM_CodeAll(benchmark::State& state) {
  auto profile = *fokusz::simgen::builtin_profile("vlm-aggregated");
  auto d = fokusz::simgen::generate(profile, stimuli(), state.range(0), 1);
  auto index = fokusz::coder::index_by_response(d.parses);
  for (auto _ : state) {
    auto coded = fokusz::coder::code_all(d.trials, index, stimuli(), exec_of(state));
    benchmark::DoNotOptimize(coded.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.trials.size()));
}

void BM_KMeans(benchmark::State& state) {
  std::vector<fokusz::simgen::Cohort> cohorts = {
      {*fokusz::simgen::builtin_profile("human-cluster-1"), static_cast<std::size_t>(state.range(0))},
      {*fokusz::simgen::builtin_profile("human-cluster-2"), static_cast<std::size_t>(state.range(0))},
      {*fokusz::simgen::builtin_profile("human-cluster-3"), static_cast<std::size_t>(state.range(0))}};
  auto d = fokusz::simgen::generate_population(cohorts, stimuli(), 15, 7);
  std::vector<fokusz::CodedTrial> joined;
  for (std::size_t i = 0; i < d.trials.size(); ++i) joined.push_back({d.trials[i], d.gold[i]});
  auto points = fokusz::cluster::to_points(
      fokusz::cluster::build_vectors(fokusz::metrics::build_profiles(joined)));
  fokusz::cluster::KMeansOptions opts;
  opts.k = 3;
  opts.restarts = 16;
  for (auto _ : state) {
    auto c = fokusz::cluster::kmeans(points, opts, exec_of(state));
    benchmark::DoNotOptimize(c.inertia);
  }
}

// second argument: 0 = serial, 1 = parallel
BENCHMARK(BM_Generate)->ArgsProduct({{2000, 20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CodeAll)->ArgsProduct({{2000, 20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KMeans)->ArgsProduct({{50, 500}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
