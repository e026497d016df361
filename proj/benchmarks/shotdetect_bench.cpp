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

#include "cutvos/rng.hpp"
#include "cutvos/shotdetect.hpp"

namespace cutvos {
namespace {

std::vector<Frame> NoiseFrames(int n, int h, int w) {
  Rng rng(3);
  std::vector<Frame> frames;
  for (int i = 0; i < n; ++i) {
    Frame f(h, w);
    for (auto& v : f.data()) v = static_cast<std::uint8_t>(rng.Index(256));
    frames.push_back(std::move(f));
  }
  return frames;
}

void BM_HistogramScore(benchmark::State& state) {
  const auto frames = NoiseFrames(2, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const HistogramScorer scorer;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scorer.Score(frames[1], std::span(frames).first(1)));
  }
}
BENCHMARK(BM_HistogramScore)->Args({480, 854})->Args({1080, 1920})->Unit(benchmark::kMicrosecond);

void BM_DetectTransitions(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (auto& s : scores) s = rng.Uniform();
  const DetectorConfig cfg{0.5, 3};
  for (auto _ : state) benchmark::DoNotOptimize(DetectTransitions(scores, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectTransitions)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace cutvos
