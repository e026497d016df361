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

#include "cutvos_cli/overlay.hpp"

#include <cmath>
#include <string>

#include "cutvos/error.hpp"

namespace cutvos::cli {

const io::Palette& OverlayPalette() {
  static const io::Palette palette = {
      {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
      {245, 130, 48}, {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
      {210, 245, 60}, {250, 190, 212}, {0, 128, 128},  {170, 110, 40}};
  return palette;
}

Frame RenderOverlay(const Frame& frame, const Mask& labels, double alpha) {
  if (!labels.same_shape(frame)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask " + std::to_string(labels.height()) + "x" + std::to_string(labels.width()) +
                    " vs frame " + std::to_string(frame.height()) + "x" +
                    std::to_string(frame.width()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be in [0, 1]");
  }
  const auto& palette = OverlayPalette();
  Frame out = frame;
  for (int r = 0; r < frame.height(); ++r) {
    for (int c = 0; c < frame.width(); ++c) {
      const int label = labels.at(r, c);
      if (label == 0) continue;
      const auto& color = palette[(label - 1) % palette.size()];
      for (int ch = 0; ch < 3; ++ch) {
        const double v = (1.0 - alpha) * frame.at(r, c, ch) + alpha * color[ch];
        out.at(r, c, ch) = static_cast<std::uint8_t>(std::lround(v));
      }
    }
  }
  return out;
}

}  // namespace cutvos::cli
