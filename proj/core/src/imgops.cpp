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

#include "cutvos/imgops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cutvos/error.hpp"

namespace cutvos {
namespace {

// Exact at multiples of 90 degrees so quarter turns stay lossless.
void SinCosDeg(double deg, double& s, double& c) {
  const double reduced = std::fmod(deg, 360.0);
  const double quarter = reduced / 90.0;
  if (quarter == std::floor(quarter)) {
    static constexpr double kSin[] = {0, 1, 0, -1};
    static constexpr double kCos[] = {1, 0, -1, 0};
    int q = static_cast<int>(quarter) % 4;
    if (q < 0) q += 4;
    s = kSin[q];
    c = kCos[q];
    return;
  }
  const double rad = deg * std::numbers::pi / 180.0;
  s = std::sin(rad);
  c = std::cos(rad);
}

bool Finite(const AffineParams& p) {
  return std::isfinite(p.rotation_deg) && std::isfinite(p.scale) &&
         std::isfinite(p.translate_x) && std::isfinite(p.translate_y) &&
         std::isfinite(p.shear_deg);
}

std::uint8_t RoundToByte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Maps destination pixel coordinates to source coordinates.
struct InverseMap {
  double a, b, c, d;  // 2x2 inverse of the forward linear part
  double cx, cy, tx, ty;

  void operator()(int x, int y, double& sx, double& sy) const {
    const double u = x - cx - tx;
    const double v = y - cy - ty;
    sx = a * u + b * v + cx;
    sy = c * u + d * v + cy;
  }
};

InverseMap MakeInverse(const AffineParams& p, int height, int width) {
  double s, c;
  SinCosDeg(p.rotation_deg, s, c);
  double shs, shc;
  SinCosDeg(p.shear_deg, shs, shc);
  const double shear = shs / shc;
  // Forward linear part: scale * R * [[1, shear], [0, 1]] with
  // R = [[c, s], [-s, c]] (counter-clockwise on screen, y pointing down).
  const double m00 = p.scale * c;
  const double m01 = p.scale * (c * shear + s);
  const double m10 = p.scale * -s;
  const double m11 = p.scale * (-s * shear + c);
  const double det = m00 * m11 - m01 * m10;
  InverseMap inv{};
  inv.a = m11 / det;
  inv.b = -m01 / det;
  inv.c = -m10 / det;
  inv.d = m00 / det;
  inv.cx = (width - 1) / 2.0;
  inv.cy = (height - 1) / 2.0;
  inv.tx = p.translate_x * width;
  inv.ty = p.translate_y * height;
  return inv;
}

void SampleBilinearZero(const Frame& src, double sx, double sy,
                        std::span<std::uint8_t> out) {
  const int h = src.height();
  const int w = src.width();
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  const double fx = sx - fx0;
  const double fy = sy - fy0;
  if (fx == 0.0 && fy == 0.0) {
    if (x0 >= 0 && x0 < w && y0 >= 0 && y0 < h) {
      auto px = src.pixel(y0, x0);
      std::copy(px.begin(), px.end(), out.begin());
    } else {
      std::fill(out.begin(), out.end(), 0);
    }
    return;
  }
  double acc[3] = {0, 0, 0};
  const int xs[2] = {x0, x0 + 1};
  const int ys[2] = {y0, y0 + 1};
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  for (int j = 0; j < 2; ++j) {
    if (ys[j] < 0 || ys[j] >= h || wy[j] == 0.0) continue;
    for (int i = 0; i < 2; ++i) {
      if (xs[i] < 0 || xs[i] >= w || wx[i] == 0.0) continue;
      const double wgt = wx[i] * wy[j];
      auto px = src.pixel(ys[j], xs[i]);
      for (int ch = 0; ch < 3; ++ch) acc[ch] += wgt * px[ch];
    }
  }
  for (int ch = 0; ch < 3; ++ch) out[ch] = RoundToByte(acc[ch]);
}

}  // namespace

AffineParams AffineRange::Sample(Rng& rng) const {
  AffineParams p;
  p.rotation_deg = rng.Uniform(-rotation_deg, rotation_deg);
  p.scale = rng.Uniform(scale_min, scale_max);
  p.translate_x = rng.Uniform(-translate, translate);
  p.translate_y = rng.Uniform(-translate, translate);
  p.shear_deg = rng.Uniform(-shear_deg, shear_deg);
  return p;
}

void AffineRange::Validate() const {
  if (!(std::isfinite(rotation_deg) && std::isfinite(scale_min) &&
        std::isfinite(scale_max) && std::isfinite(translate) &&
        std::isfinite(shear_deg))) {
    throw Error(ErrorCode::kNonFiniteParams, "affine range has non-finite bounds");
  }
  if (scale_min <= 0.0 || scale_max < scale_min) {
    throw Error(ErrorCode::kInvalidConfig, "affine scale range must be 0 < min <= max");
  }
  if (rotation_deg < 0 || translate < 0 || shear_deg < 0 || shear_deg >= 90) {
    throw Error(ErrorCode::kInvalidConfig,
                "affine half-widths must be non-negative (shear < 90)");
  }
}

FrameMask AffineTransform(const Frame& frame, const Mask& mask,
                          const AffineParams& params) {
  if (!Finite(params)) {
    throw Error(ErrorCode::kNonFiniteParams, "affine parameters must be finite");
  }
  if (params.scale <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "affine scale must be positive");
  }
  if (!frame.same_shape(mask)) {
    throw Error(ErrorCode::kDimensionMismatch, "frame and mask differ in size");
  }
  const int h = frame.height();
  const int w = frame.width();
  const InverseMap inv = MakeInverse(params, h, w);
  FrameMask out{Frame(h, w), Mask(h, w)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sx, sy;
      inv(x, y, sx, sy);
      SampleBilinearZero(frame, sx, sy, out.frame.pixel(y, x));
      const double rx = std::floor(sx + 0.5);
      const double ry = std::floor(sy + 0.5);
      if (rx >= 0 && rx < w && ry >= 0 && ry < h) {
        out.mask.at(y, x) = mask.at(static_cast<int>(ry), static_cast<int>(rx));
      }
    }
  }
  return out;
}

FrameMask HFlip(const Frame& frame, const Mask& mask) {
  if (!frame.same_shape(mask)) {
    throw Error(ErrorCode::kDimensionMismatch, "frame and mask differ in size");
  }
  const int h = frame.height();
  const int w = frame.width();
  FrameMask out{Frame(h, w), Mask(h, w)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto src = frame.pixel(y, w - 1 - x);
      std::copy(src.begin(), src.end(), out.frame.pixel(y, x).begin());
      out.mask.at(y, x) = mask.at(y, w - 1 - x);
    }
  }
  return out;
}

Frame CopyForeground(const Frame& dst_frame, const Frame& src_frame,
                     const Mask& src_mask) {
  if (!dst_frame.same_shape(src_frame) || !dst_frame.same_shape(src_mask)) {
    throw Error(ErrorCode::kDimensionMismatch, "copy_foreground buffers differ in size");
  }
  Frame out = dst_frame;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (src_mask.at(y, x) == 0) continue;
      auto src = src_frame.pixel(y, x);
      std::copy(src.begin(), src.end(), out.pixel(y, x).begin());
    }
  }
  return out;
}

FrameMask GradualTranslation(const Frame& frame, const Mask& mask, int elapsed,
                             int horizon, double base_x, double base_y) {
  if (horizon <= 0) {
    throw Error(ErrorCode::kInvalidHorizon, "horizon must be positive");
  }
  if (elapsed < 0 || elapsed > horizon) {
    throw Error(ErrorCode::kInvalidArgument, "elapsed must lie in [0, horizon]");
  }
  const double factor = static_cast<double>(horizon - elapsed) / horizon;
  AffineParams p;
  p.translate_x = base_x * factor;
  p.translate_y = base_y * factor;
  return AffineTransform(frame, mask, p);
}

Frame ResizeFrame(const Frame& frame, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "resize target must be positive");
  }
  if (frame.same_shape(height, width)) return frame;
  const int ih = frame.height();
  const int iw = frame.width();
  const double ry = static_cast<double>(ih) / height;
  const double rx = static_cast<double>(iw) / width;
  Frame out(height, width);
  for (int y = 0; y < height; ++y) {
    const double sy = std::clamp((y + 0.5) * ry - 0.5, 0.0, ih - 1.0);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, ih - 1);
    const double fy = sy - y0;
    for (int x = 0; x < width; ++x) {
      const double sx = std::clamp((x + 0.5) * rx - 0.5, 0.0, iw - 1.0);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, iw - 1);
      const double fx = sx - x0;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = frame.at(y0, x0, ch) * (1 - fx) + frame.at(y0, x1, ch) * fx;
        const double bot = frame.at(y1, x0, ch) * (1 - fx) + frame.at(y1, x1, ch) * fx;
        out.at(y, x, ch) = RoundToByte(top * (1 - fy) + bot * fy);
      }
    }
  }
  return out;
}

Mask ResizeMask(const Mask& mask, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "resize target must be positive");
  }
  if (mask.same_shape(height, width)) return mask;
  Mask out(height, width);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * mask.height() / height),
                            mask.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * mask.width() / width),
                              mask.width() - 1);
      out.at(y, x) = mask.at(sy, sx);
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const AffineParams& p) {
  j = {{"rotation", p.rotation_deg},
       {"scale", p.scale},
       {"translate", {p.translate_x, p.translate_y}},
       {"shear", p.shear_deg}};
}

void from_json(const nlohmann::json& j, AffineParams& p) {
  p.rotation_deg = j.at("rotation").get<double>();
  p.scale = j.at("scale").get<double>();
  p.translate_x = j.at("translate").at(0).get<double>();
  p.translate_y = j.at("translate").at(1).get<double>();
  p.shear_deg = j.at("shear").get<double>();
}

void to_json(nlohmann::json& j, const AffineRange& r) {
  j = {{"rotation", r.rotation_deg},
       {"scale_min", r.scale_min},
       {"scale_max", r.scale_max},
       {"translate", r.translate},
       {"shear", r.shear_deg}};
}

void from_json(const nlohmann::json& j, AffineRange& r) {
  r.rotation_deg = j.value("rotation", r.rotation_deg);
  r.scale_min = j.value("scale_min", r.scale_min);
  r.scale_max = j.value("scale_max", r.scale_max);
  r.translate = j.value("translate", r.translate);
  r.shear_deg = j.value("shear", r.shear_deg);
}

}  // namespace cutvos
