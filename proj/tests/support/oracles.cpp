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

#include "support/oracles.hpp"

#include <cmath>
#include <limits>

#include "cutvos/rng.hpp"

namespace cutvos::testing {

double BruteIou(const Mask& a, const Mask& b) {
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    inter += a.data()[i] && b.data()[i];
    uni += a.data()[i] || b.data()[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

std::vector<std::pair<int, int>> BoundaryPixels(const Mask& m) {
  std::vector<std::pair<int, int>> out;
  const int dy[] = {-1, 1, 0, 0}, dx[] = {0, 0, -1, 1};
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(y, x)) continue;
      for (int k = 0; k < 4; ++k) {
        const int ny = y + dy[k], nx = x + dx[k];
        if (ny >= 0 && ny < m.height() && nx >= 0 && nx < m.width() && !m.at(ny, nx)) {
          out.emplace_back(y, x);
          break;
        }
      }
    }
  }
  return out;
}

namespace {

double FractionWithin(const std::vector<std::pair<int, int>>& a,
                      const std::vector<std::pair<int, int>>& b, int tol) {
  int hit = 0;
  for (auto [y, x] : a) {
    double best = std::numeric_limits<double>::infinity();
    for (auto [v, u] : b) best = std::min(best, std::hypot(y - v, x - u));
    hit += best <= tol;
  }
  return static_cast<double>(hit) / a.size();
}

}  // namespace

double BruteBoundaryF(const Mask& pred, const Mask& gt, int tol) {
  const auto bp = BoundaryPixels(pred), bg = BoundaryPixels(gt);
  if (bp.empty() && bg.empty()) return 1.0;
  if (bp.empty() || bg.empty()) return 0.0;
  const double p = FractionWithin(bp, bg, tol), r = FractionWithin(bg, bp, tol);
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

double BruteJt(const std::vector<Mask>& pred, const std::vector<Mask>& gt,
               const ShotAnnotation& shots) {
  double sum = 0.0;
  for (const auto& seg : shots.segments) {
    int app = seg.start;
    for (int t = seg.start; t < seg.end; ++t) {
      if (CountForeground(gt[t]) > 0) {
        app = t;
        break;
      }
    }
    sum += (BruteIou(pred[seg.start], gt[seg.start]) + BruteIou(pred[app], gt[app])) / 2.0;
  }
  return sum / shots.shot_count();
}

std::vector<GridPoint> BruteCenters(const RegionPartition& p) {
  std::vector<GridPoint> out;
  for (int region = 1; region <= p.k; ++region) {
    double best = -1;
    GridPoint arg;
    for (int r = 0; r < p.h; ++r) {
      for (int c = 0; c < p.w; ++c) {
        if (p.label(r, c) != region) continue;
        double d = std::numeric_limits<double>::infinity();
        for (int v = -1; v <= p.h; ++v) {
          for (int u = -1; u <= p.w; ++u) {
            const bool outside =
                v < 0 || v >= p.h || u < 0 || u >= p.w || p.label(v, u) != region;
            if (outside) d = std::min(d, std::hypot(v - r, u - c));
          }
        }
        if (d > best) {
          best = d;
          arg = {r, c};
        }
      }
    }
    out.push_back(arg);
  }
  return out;
}

TmaTrace InterpretTma(std::uint64_t seed, const TmaConfig& cfg, std::size_t n_donors,
                      int donor_len) {
  Rng rng(seed);
  TmaTrace t;
  const int T = cfg.clip_length;
  if (!(rng.Uniform() < cfg.p_trans)) {
    t.next = rng.NextU64();
    return t;
  }
  t.d.transitioned = true;
  t.d.once = rng.Uniform() < cfg.p_once;
  t.s = t.d.once ? T / 2 : T / 3;
  t.e = t.d.once ? T : T / 3 * 2 + 1;
  if (rng.Uniform() < cfg.p_cut) {
    t.d.cut = true;
    t.d.same_video = rng.Uniform() < cfg.p_same;
    t.d.copy = rng.Uniform() < cfg.p_copy;
    if (t.d.same_video) {
      rng.Uniform();  // offset
    } else {
      rng.Index(n_donors);
      if (donor_len >= T) rng.Index(donor_len - T + 1);
    }
    for (int k = 0; k < 5; ++k) rng.Uniform();  // moderate affine
    if (!t.d.same_video && t.d.copy) {
      t.base_x = rng.Uniform(-cfg.gtranslation_max, cfg.gtranslation_max);
      t.base_y = rng.Uniform(-cfg.gtranslation_max, cfg.gtranslation_max);
    }
  } else {
    for (int i = t.s; i < t.e; ++i) {
      for (int k = 0; k < 5; ++k) rng.Uniform();  // strong affine per frame
    }
  }
  t.d.hflip = rng.Uniform() < cfg.p_hflip;
  if (t.s >= 1) t.labels.push_back(t.s);
  if (t.e < T) t.labels.push_back(t.e);
  t.next = rng.NextU64();
  return t;
}

}  // namespace cutvos::testing
