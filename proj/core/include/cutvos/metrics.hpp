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

#ifndef CUTVOS_METRICS_HPP_
#define CUTVOS_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/dataset.hpp"
#include "cutvos/image.hpp"

namespace cutvos {

/// Region similarity. Nonzero pixels are foreground; two empty masks score 1
/// so that a correctly predicted absence counts as a success.
double Iou(const Mask& pred, const Mask& gt);

/// Foreground pixels with a 4-neighbour inside the image that is background.
/// Pixels are not boundary merely because they touch the image border.
Mask BoundaryMap(const Mask& mask);

/// Boundary F-measure: boundary pixels match when within `tolerance_px`
/// (Euclidean disk) of the other mask's boundary. 1 when neither mask has a
/// boundary, 0 when only one does.
double BoundaryF(const Mask& pred, const Mask& gt, int tolerance_px);

/// ceil(0.008 * image diagonal), the usual DAVIS setting.
int DefaultBoundaryTolerance(int height, int width);

struct JtTerm {
  int shot = 0;
  int tr_frame = 0;
  int app_frame = 0;
  double iou_tr = 0.0;
  double iou_app = 0.0;
};

struct JtResult {
  double jt = 0.0;
  std::vector<JtTerm> terms;
};

/// Cross-shot region similarity: mean over shots of the average IoU at the
/// shot's first frame and at the first frame where the object appears in the
/// shot (the first frame again if it never appears).
JtResult ComputeJt(std::span<const Mask> pred, std::span<const Mask> gt,
                   const ShotAnnotation& shots);

struct EvalReport {
  std::vector<double> per_frame_j;
  std::vector<double> per_frame_f;
  double mean_j = 0.0;
  double mean_f = 0.0;
  double j_and_f = 0.0;
  double jt = 0.0;
  std::vector<JtTerm> per_shot_jt_terms;
  int boundary_tolerance = 0;
};

/// J and F over every frame of one object track, plus J_t.
EvalReport EvaluateTrack(std::span<const Mask> pred, std::span<const Mask> gt,
                         const ShotAnnotation& shots,
                         std::optional<int> boundary_tolerance = std::nullopt);

struct TypeTally {
  int n_correct = 0;
  int n_total = 0;
  double accuracy() const { return n_total > 0 ? static_cast<double>(n_correct) / n_total : 0.0; }
};

struct TransitionAccuracyReport {
  std::map<TransitionType, TypeTally> per_type;
  /// Per-type accuracy weighted by how often each type occurs.
  double expected_accuracy = 1.0;

  void Merge(const TransitionAccuracyReport& other);
  /// Recomputes expected_accuracy from the tallies, optionally with an
  /// external type distribution.
  void UpdateExpected(const std::map<TransitionType, double>* weights = nullptr);
};

/// A transition is correct when IoU > 0.5 on up to `context` frames before
/// and after the cut (clipped to the adjoining shots), plus the first
/// reappearance frame for delayed cut-ins. Shots with both a presence and a
/// view type count towards both.
TransitionAccuracyReport TransitionAccuracy(std::span<const Mask> pred,
                                            std::span<const Mask> gt,
                                            const ShotAnnotation& shots, int context = 2);

struct DetectionScore {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  int matched = 0;
};

/// Greedy one-to-one matching, nearest pairs first, within ±tolerance frames.
DetectionScore ShotDetectionPr(std::span<const int> detected, std::span<const int> gt,
                               int tolerance_frames = 1);

/// Mean of per-object reports (J, F, J&F, J_t).
struct AggregateScores {
  int n_objects = 0;
  double mean_j = 0.0;
  double mean_f = 0.0;
  double j_and_f = 0.0;
  double jt = 0.0;
};
AggregateScores Aggregate(std::span<const EvalReport> reports);

/// Rounds to 6 decimal places for serialisation.
double Round6(double v);

nlohmann::json ToJson(const EvalReport& report);
nlohmann::json ToJson(const TransitionAccuracyReport& report);
nlohmann::json ToJson(const AggregateScores& scores);
nlohmann::json ToJson(const DetectionScore& score);

}  // namespace cutvos

#endif  // CUTVOS_METRICS_HPP_
