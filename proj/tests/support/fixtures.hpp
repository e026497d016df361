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

#ifndef CUTVOS_TESTS_SUPPORT_FIXTURES_HPP_
#define CUTVOS_TESTS_SUPPORT_FIXTURES_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cutvos/dataset.hpp"
#include "cutvos/image.hpp"
#include "cutvos/rng.hpp"

namespace cutvos::testing {

using Rgb = std::array<std::uint8_t, 3>;

/// Smooth sinusoidal texture around `base`; `phase` pans it horizontally.
Frame TexturedFrame(int h, int w, Rgb base, int phase = 0, int amplitude = 20);
Frame SolidFrame(int h, int w, Rgb color);
/// Uniform random pixels.
Frame NoiseFrame(int h, int w, Rng& rng);

/// Label `label` on rows [r0, r1) x cols [c0, c1), clipped to the canvas.
Mask RectMask(int h, int w, int r0, int c0, int r1, int c1, std::uint8_t label = 1);
Mask RandomMask(int h, int w, double density, Rng& rng, std::uint8_t label = 1);

/// Paints `color` wherever `mask` is nonzero.
void Paint(Frame& frame, const Mask& mask, Rgb color);

struct MovingObjectSpec {
  std::string video_id = "clip";
  int length = 8;
  int height = 32;
  int width = 32;
  Rgb background = {40, 160, 60};
  Rgb object = {230, 220, 40};
  int top = 10;
  int left = 8;
  int size = 8;
  int dx = 1;  // pixels per frame
  int dy = 0;
  int pan = 1;  // background pan per frame
  int object_id = 1;
};

/// A rectangle translating rigidly over a slowly panning textured background.
FrameSequenceSample MovingObjectSample(const MovingObjectSpec& spec);

/// Writes a sample into <root>/JPEGImages|Annotations/<video_id>/ using PNG
/// frames (lossless) unless `jpeg` is set.
void WriteSampleToDataset(const std::filesystem::path& root, const FrameSequenceSample& sample,
                          bool jpeg = false);

/// FNV-1a over every byte of frames and masks.
std::uint64_t HashSample(const FrameSequenceSample& sample);

/// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& name);

}  // namespace cutvos::testing

#endif  // CUTVOS_TESTS_SUPPORT_FIXTURES_HPP_
