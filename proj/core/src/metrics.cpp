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

#include "cutvos/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "cutvos/error.hpp"

namespace cutvos {
namespace {

void RequireSameShape(const Mask& a, const Mask& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                    std::to_string(b.height()) + "x" + std::to_string(b.width()));
  }
}

void RequireTracks(std::span<const Mask> pred, std::span<const Mask> gt,
                   const ShotAnnotation& shots) {
  if (shots.segments.empty()) throw Error(ErrorCode::kEmptyShotList, "no shots");
  shots.Validate();
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kMissingFrame, "prediction and ground truth lengths differ");
  }
  if (static_cast<int>(gt.size()) != shots.length()) {
    throw Error(ErrorCode::kOutOfRangeIndex, "shots cover " + std::to_string(shots.length()) +
                                                 " frames, track has " +
                                                 std::to_string(gt.size()));
  }
}

// Fraction of `from` boundary pixels that have a `to` boundary pixel within
// the disk. Returns -1 when `from` has no boundary pixels.
double MatchedFraction(const Mask& from, const Mask& to, int tol) {
  const int h = from.height();
  const int w = from.width();
  std::size_t total = 0, hit = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (from.at(y, x) == 0) continue;
      ++total;
      bool found = false;
      for (int dy = -tol; dy <= tol && !found; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -tol; dx <= tol; ++dx) {
          if (dx * dx + dy * dy > tol * tol) continue;
          const int xx = x + dx;
          if (xx < 0 || xx >= w) continue;
          if (to.at(yy, xx) != 0) {
            found = true;
            break;
          }
        }
      }
      hit += found;
    }
  }
  return total == 0 ? -1.0 : static_cast<double>(hit) / total;
}

}  // namespace

double Iou(const Mask& pred, const Mask& gt) {
  RequireSameShape(pred, gt);
  std::size_t inter = 0, uni = 0;
  auto p = pred.data();
  auto g = gt.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool a = p[i] != 0;
    const bool b = g[i] != 0;
    inter += a && b;
    uni += a || b;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

Mask BoundaryMap(const Mask& mask) {
  const int h = mask.height();
  const int w = mask.width();
  Mask out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(y, x) == 0) continue;
      const bool edge = (y > 0 && mask.at(y - 1, x) == 0) ||
                        (y + 1 < h && mask.at(y + 1, x) == 0) ||
                        (x > 0 && mask.at(y, x - 1) == 0) ||
                        (x + 1 < w && mask.at(y, x + 1) == 0);
      out.at(y, x) = edge ? 1 : 0;
    }
  }
  return out;
}

double BoundaryF(const Mask& pred, const Mask& gt, int tolerance_px) {
  RequireSameShape(pred, gt);
  if (tolerance_px < 0) throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
  const Mask pb = BoundaryMap(pred);
  const Mask gb = BoundaryMap(gt);
  const double precision = MatchedFraction(pb, gb, tolerance_px);
  const double recall = MatchedFraction(gb, pb, tolerance_px);
  if (precision < 0 && recall < 0) return 1.0;
  if (precision < 0 || recall < 0) return 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

int DefaultBoundaryTolerance(int height, int width) {
  return static_cast<int>(std::ceil(0.008 * std::hypot(height, width)));
}

JtResult ComputeJt(std::span<const Mask> pred, std::span<const Mask> gt,
                   const ShotAnnotation& shots) {
  RequireTracks(pred, gt, shots);
  JtResult result;
  double sum = 0.0;
  for (int i = 0; i < shots.shot_count(); ++i) {
    const auto& seg = shots.segments[i];
    JtTerm term;
    term.shot = i;
    term.tr_frame = seg.start;
    term.app_frame = seg.start;
    for (int t = seg.start; t < seg.end; ++t) {
      if (!IsEmpty(gt[t])) {
        term.app_frame = t;
        break;
      }
    }
    term.iou_tr = Iou(pred[term.tr_frame], gt[term.tr_frame]);
    term.iou_app = Iou(pred[term.app_frame], gt[term.app_frame]);
    sum += (term.iou_tr + term.iou_app) / 2.0;
    result.terms.push_back(term);
  }
  result.jt = sum / shots.shot_count();
  return result;
}

EvalReport EvaluateTrack(std::span<const Mask> pred, std::span<const Mask> gt,
                         const ShotAnnotation& shots, std::optional<int> boundary_tolerance) {
  RequireTracks(pred, gt, shots);
  EvalReport report;
  report.boundary_tolerance = boundary_tolerance.value_or(
      gt.empty() ? 0 : DefaultBoundaryTolerance(gt[0].height(), gt[0].width()));
  double sum_j = 0.0, sum_f = 0.0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    const double j = Iou(pred[t], gt[t]);
    const double f = BoundaryF(pred[t], gt[t], report.boundary_tolerance);
    report.per_frame_j.push_back(j);
    report.per_frame_f.push_back(f);
    sum_j += j;
    sum_f += f;
  }
  report.mean_j = sum_j / static_cast<double>(gt.size());
  report.mean_f = sum_f / static_cast<double>(gt.size());
  report.j_and_f = (report.mean_j + report.mean_f) / 2.0;
  JtResult jt = ComputeJt(pred, gt, shots);
  report.jt = jt.jt;
  report.per_shot_jt_terms = std::move(jt.terms);
  return report;
}

void TransitionAccuracyReport::Merge(const TransitionAccuracyReport& other) {
  for (const auto& [type, tally] : other.per_type) {
    per_type[type].n_correct += tally.n_correct;
    per_type[type].n_total += tally.n_total;
  }
  UpdateExpected();
}

void TransitionAccuracyReport::UpdateExpected(
    const std::map<TransitionType, double>* weights) {
  double num = 0.0, den = 0.0;
  for (const auto& [type, tally] : per_type) {
    if (tally.n_total == 0) continue;
    double w = static_cast<double>(tally.n_total);
    if (weights != nullptr) {
      auto it = weights->find(type);
      w = it == weights->end() ? 0.0 : it->second;
    }
    num += w * tally.accuracy();
    den += w;
  }
  expected_accuracy = den > 0.0 ? num / den : 1.0;
}

TransitionAccuracyReport TransitionAccuracy(std::span<const Mask> pred,
                                            std::span<const Mask> gt,
                                            const ShotAnnotation& shots, int context) {
  RequireTracks(pred, gt, shots);
  if (context < 1) throw Error(ErrorCode::kInvalidArgument, "context must be >= 1");
  TransitionAccuracyReport report;
  for (int i = 1; i < shots.shot_count(); ++i) {
    const auto& prev = shots.segments[i - 1];
    const auto& seg = shots.segments[i];
    if (!seg.presence && !seg.view) {
      throw Error(ErrorCode::kMissingTypeLabel,
                  "shot starting at frame " + std::to_string(seg.start) + " has no type");
    }
    std::vector<int> frames;
    for (int t = std::max(prev.start, seg.start - context); t < seg.start; ++t) frames.push_back(t);
    for (int t = seg.start; t < std::min(seg.end, seg.start + context); ++t) frames.push_back(t);
    if (seg.presence == TransitionType::kDelayedCutIn) {
      for (int t = seg.start; t < seg.end; ++t) {
        if (!IsEmpty(gt[t])) {
          frames.push_back(t);
          break;
        }
      }
    }
    const bool correct = std::all_of(frames.begin(), frames.end(),
                                     [&](int t) { return Iou(pred[t], gt[t]) > 0.5; });
    for (const auto& type : {seg.presence, seg.view}) {
      if (!type) continue;
      auto& tally = report.per_type[*type];
      tally.n_total += 1;
      tally.n_correct += correct;
    }
  }
  report.UpdateExpected();
  return report;
}

DetectionScore ShotDetectionPr(std::span<const int> detected, std::span<const int> gt,
                               int tolerance_frames) {
  std::vector<std::tuple<int, int, int>> pairs;  // distance, gt index, detection index
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t d = 0; d < detected.size(); ++d) {
      const int dist = std::abs(detected[d] - gt[g]);
      if (dist <= tolerance_frames) {
        pairs.emplace_back(dist, static_cast<int>(g), static_cast<int>(d));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> gt_used(gt.size(), false), det_used(detected.size(), false);
  DetectionScore score;
  for (const auto& [dist, g, d] : pairs) {
    if (gt_used[g] || det_used[d]) continue;
    gt_used[g] = det_used[d] = true;
    score.matched += 1;
  }
  score.precision = detected.empty() ? 1.0 : static_cast<double>(score.matched) / detected.size();
  score.recall = gt.empty() ? 1.0 : static_cast<double>(score.matched) / gt.size();
  const double denom = score.precision + score.recall;
  score.f1 = denom > 0.0 ? 2.0 * score.precision * score.recall / denom : 0.0;
  return score;
}

AggregateScores Aggregate(std::span<const EvalReport> reports) {
  AggregateScores agg;
  agg.n_objects = static_cast<int>(reports.size());
  if (reports.empty()) return agg;
  for (const auto& r : reports) {
    agg.mean_j += r.mean_j;
    agg.mean_f += r.mean_f;
    agg.jt += r.jt;
  }
  agg.mean_j /= agg.n_objects;
  agg.mean_f /= agg.n_objects;
  agg.jt /= agg.n_objects;
  agg.j_and_f = (agg.mean_j + agg.mean_f) / 2.0;
  return agg;
}

double Round6(double v) { return std::round(v * 1e6) / 1e6; }

nlohmann::json ToJson(const EvalReport& report) {
  nlohmann::json j;
  nlohmann::json pj = nlohmann::json::array(), pf = nlohmann::json::array();
  for (double v : report.per_frame_j) pj.push_back(Round6(v));
  for (double v : report.per_frame_f) pf.push_back(Round6(v));
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : report.per_shot_jt_terms) {
    terms.push_back({{"shot", t.shot},
                     {"tr_frame", t.tr_frame},
                     {"app_frame", t.app_frame},
                     {"iou_tr", Round6(t.iou_tr)},
                     {"iou_app", Round6(t.iou_app)}});
  }
  j["per_frame_j"] = pj;
  j["per_frame_f"] = pf;
  j["mean_j"] = Round6(report.mean_j);
  j["mean_f"] = Round6(report.mean_f);
  j["j_and_f"] = Round6(report.j_and_f);
  j["jt"] = Round6(report.jt);
  j["per_shot_jt_terms"] = terms;
  j["boundary_tolerance"] = report.boundary_tolerance;
  return j;
}

nlohmann::json ToJson(const TransitionAccuracyReport& report) {
  nlohmann::json per_type = nlohmann::json::object();
  for (const auto& [type, tally] : report.per_type) {
    per_type[std::string(TransitionTypeName(type))] = {
        {"n_correct", tally.n_correct},
        {"n_total", tally.n_total},
        {"accuracy", Round6(tally.accuracy())}};
  }
  return {{"per_type", per_type}, {"expected_accuracy", Round6(report.expected_accuracy)}};
}

nlohmann::json ToJson(const AggregateScores& s) {
  return {{"n_objects", s.n_objects},
          {"mean_j", Round6(s.mean_j)},
          {"mean_f", Round6(s.mean_f)},
          {"j_and_f", Round6(s.j_and_f)},
          {"jt", Round6(s.jt)}};
}

nlohmann::json ToJson(const DetectionScore& s) {
  return {{"precision", Round6(s.precision)},
          {"recall", Round6(s.recall)},
          {"f1", Round6(s.f1)},
          {"matched", s.matched}};
}

}  // namespace cutvos
