// Copyright 2026 The cutvos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "cutvos/localcues.hpp"
#include "cutvos/rng.hpp"

namespace cutvos {
namespace {

void BM_MstPartition(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0)), w = static_cast<int>(state.range(1));
  FeatureGrid g(h, w, 3);
  Rng rng(5);
  for (auto& v : g.values) v = static_cast<float>(rng.Uniform());
  const MaskGraph graph = BuildMaskGraph(g, Mask(h, w, 1));
  for (auto _ : state) benchmark::DoNotOptimize(MstPartition(graph, 4));
  state.SetItemsProcessed(state.iterations() * h * w);
}
BENCHMARK(BM_MstPartition)->Args({30, 54})->Args({120, 214})->Unit(benchmark::kMicrosecond);

void BM_BuildLocalCues(benchmark::State& state) {
  Rng rng(6);
  Frame frame(480, 854);
  for (auto& v : frame.data()) v = static_cast<std::uint8_t>(rng.Index(256));
  Mask mask(480, 854);
  for (int r = 100; r < 380; ++r) {
    for (int c = 200; c < 650; ++c) mask.at(r, c) = 1;
  }
  const LocalCueOptions options;
  for (auto _ : state) benchmark::DoNotOptimize(BuildLocalCues(frame, mask, options));
}
BENCHMARK(BM_BuildLocalCues)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cutvos
