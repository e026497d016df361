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

#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cutvos/image_io.hpp"

namespace cutvos::testing {
namespace fs = std::filesystem;

Frame TexturedFrame(int h, int w, Rgb base, int phase, int amplitude) {
  Frame f(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = std::sin(2 * std::numbers::pi * (x + phase) / 37.0) *
                       std::cos(2 * std::numbers::pi * y / 29.0);
      for (int ch = 0; ch < 3; ++ch) {
        const double v = base[ch] + amplitude * u * (ch == 1 ? -1.0 : 1.0);
        f.at(y, x, ch) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return f;
}

Frame SolidFrame(int h, int w, Rgb color) {
  Frame f(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < 3; ++ch) f.at(y, x, ch) = color[ch];
    }
  }
  return f;
}

Frame NoiseFrame(int h, int w, Rng& rng) {
  Frame f(h, w);
  for (auto& v : f.data()) v = static_cast<std::uint8_t>(rng.NextU64() & 0xFF);
  return f;
}

Mask RectMask(int h, int w, int r0, int c0, int r1, int c1, std::uint8_t label) {
  Mask m(h, w);
  for (int y = std::max(r0, 0); y < std::min(r1, h); ++y) {
    for (int x = std::max(c0, 0); x < std::min(c1, w); ++x) m.at(y, x) = label;
  }
  return m;
}

Mask RandomMask(int h, int w, double density, Rng& rng, std::uint8_t label) {
  Mask m(h, w);
  for (auto& v : m.data()) v = rng.Uniform() < density ? label : 0;
  return m;
}

void Paint(Frame& frame, const Mask& mask, Rgb color) {
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      if (mask.at(y, x) == 0) continue;
      for (int ch = 0; ch < 3; ++ch) frame.at(y, x, ch) = color[ch];
    }
  }
}

FrameSequenceSample MovingObjectSample(const MovingObjectSpec& spec) {
  FrameSequenceSample s;
  s.video_id = spec.video_id;
  s.object_id = spec.object_id;
  for (int t = 0; t < spec.length; ++t) {
    Frame f = TexturedFrame(spec.height, spec.width, spec.background, t * spec.pan);
    const int top = spec.top + t * spec.dy;
    const int left = spec.left + t * spec.dx;
    Mask m = RectMask(spec.height, spec.width, top, left, top + spec.size, left + spec.size,
                      static_cast<std::uint8_t>(spec.object_id));
    Paint(f, m, spec.object);
    s.frames.push_back(std::move(f));
    s.masks.push_back(std::move(m));
  }
  return s;
}

void WriteSampleToDataset(const fs::path& root, const FrameSequenceSample& sample, bool jpeg) {
  for (int t = 0; t < sample.length(); ++t) {
    io::WriteFrame(root / "JPEGImages" / sample.video_id / io::FrameName(t, jpeg ? ".jpg" : ".png"),
                   sample.frames[t]);
    io::WriteLabelPng(root / "Annotations" / sample.video_id / io::FrameName(t, ".png"),
                      sample.masks[t]);
  }
}

std::uint64_t HashSample(const FrameSequenceSample& sample) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::span<const std::uint8_t> bytes) {
    for (auto b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& f : sample.frames) mix(f.data());
  for (const auto& m : sample.masks) mix(m.data());
  return h;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cutvos_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace cutvos::testing
