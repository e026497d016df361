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

#ifndef CUTVOS_IMGOPS_HPP_
#define CUTVOS_IMGOPS_HPP_

#include <nlohmann/json.hpp>

#include "cutvos/image.hpp"
#include "cutvos/rng.hpp"

namespace cutvos {

/// Parameters of one affine warp about the image centre. Translation is a
/// fraction of width (x) and height (y).
struct AffineParams {
  double rotation_deg = 0.0;
  double scale = 1.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  double shear_deg = 0.0;

  friend bool operator==(const AffineParams&, const AffineParams&) = default;
};

/// Sampling bounds for AffineParams. Every field is drawn uniformly:
/// rotation in [-rotation_deg, rotation_deg), scale in [scale_min, scale_max),
/// each translation component in [-translate, translate), shear in
/// [-shear_deg, shear_deg).
struct AffineRange {
  double rotation_deg = 0.0;
  double scale_min = 1.0;
  double scale_max = 1.0;
  double translate = 0.0;
  double shear_deg = 0.0;

  /// Small warp applied to donor clips.
  static AffineRange Moderate() { return {10.0, 0.9, 1.1, 0.05, 5.0}; }
  /// Large warp that stands in for close-up / distant-view cuts.
  static AffineRange Strong() { return {25.0, 0.5, 1.6, 0.2, 15.0}; }

  /// Draw order: rotation, scale, translate_x, translate_y, shear.
  AffineParams Sample(Rng& rng) const;
  void Validate() const;

  friend bool operator==(const AffineRange&, const AffineRange&) = default;
};

struct FrameMask {
  Frame frame;
  Mask mask;
};

/// Applies one geometric map to both buffers. The frame is sampled
/// bilinearly and the mask with nearest neighbour; anything mapped from
/// outside the canvas becomes 0.
FrameMask AffineTransform(const Frame& frame, const Mask& mask,
                          const AffineParams& params);

FrameMask HFlip(const Frame& frame, const Mask& mask);

/// Copies `src_frame` into `dst_frame` wherever `src_mask` is nonzero.
Frame CopyForeground(const Frame& dst_frame, const Frame& src_frame,
                     const Mask& src_mask);

/// Translates by `base_x`, `base_y` (fractions of width / height) scaled by
/// (horizon - elapsed) / horizon, so the shift decays to 0 at `elapsed ==
/// horizon`.
FrameMask GradualTranslation(const Frame& frame, const Mask& mask, int elapsed,
                             int horizon, double base_x, double base_y);

/// Bilinear resize with edge clamping.
Frame ResizeFrame(const Frame& frame, int height, int width);
/// Nearest-neighbour resize.
Mask ResizeMask(const Mask& mask, int height, int width);

void to_json(nlohmann::json& j, const AffineParams& p);
void from_json(const nlohmann::json& j, AffineParams& p);
void to_json(nlohmann::json& j, const AffineRange& r);
void from_json(const nlohmann::json& j, AffineRange& r);

}  // namespace cutvos

#endif  // CUTVOS_IMGOPS_HPP_
