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

#ifndef CUTVOS_SHOTDETECT_HPP_
#define CUTVOS_SHOTDETECT_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/dataset.hpp"
#include "cutvos/image.hpp"

namespace cutvos {

/// Online transition scorer: sees the current frame and up to
/// `window_size()` earlier frames (oldest first), never later ones. Scores lie
/// in [0, 1] and must be deterministic.
class TransitionScorer {
 public:
  virtual ~TransitionScorer() = default;
  virtual int window_size() const = 0;
  virtual double Score(const Frame& current, std::span<const Frame> previous) const = 0;
};

/// Baseline scorer: half colour-histogram distance (32 bins per channel,
/// 1 - intersection) and half mean absolute pixel difference, both against
/// the most recent previous frame.
class HistogramScorer final : public TransitionScorer {
 public:
  static constexpr int kBins = 32;

  explicit HistogramScorer(int window_size = 2);

  int window_size() const override { return window_size_; }
  double Score(const Frame& current, std::span<const Frame> previous) const override;

 private:
  int window_size_;
};

struct DetectorConfig {
  double tau_tr = 0.5;
  int min_shot_len = 2;

  void Validate() const;
};

/// Scores every frame; frame 0 has no history and scores 0.
std::vector<double> ScoreFrames(std::span<const Frame> frames, const TransitionScorer& scorer);

/// Frame t >= 1 is a transition when scores[t] >= tau_tr and the last emitted
/// transition is at least min_shot_len frames back.
std::vector<int> DetectTransitions(std::span<const double> scores, const DetectorConfig& config);

std::vector<int> DetectTransitions(std::span<const Frame> frames, const TransitionScorer& scorer,
                                   const DetectorConfig& config);

/// Splits [0, length) at each index; types are left empty.
ShotAnnotation ScoresToShots(std::span<const int> transitions, int length);

/// Reads one score per frame. Lines may be a bare float or "index,score";
/// blank lines and lines starting with '#' or a non-numeric header are
/// skipped.
std::vector<double> ReadScoresFile(const std::filesystem::path& path);

}  // namespace cutvos

#endif  // CUTVOS_SHOTDETECT_HPP_
