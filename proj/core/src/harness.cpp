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

#include "cutvos/harness.hpp"

#include <algorithm>

#include "cutvos/error.hpp"

namespace cutvos {

std::string_view MemoryKindName(MemoryKind kind) {
  switch (kind) {
    case MemoryKind::kConditional: return "Conditional";
    case MemoryKind::kAdjacent: return "Adjacent";
    case MemoryKind::kScene: return "Scene";
    case MemoryKind::kLocalCue: return "LocalCue";
  }
  return "Unknown";
}

std::string_view RouteName(Route route) {
  return route == Route::kNormal ? "Normal" : "Transition";
}

std::vector<float> DefaultPayload(const Frame& frame, const Mask& mask) {
  constexpr int kBins = 8;
  std::vector<float> hist(3 * kBins, 0.0f);
  std::size_t n = 0;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      if (mask.at(y, x) == 0) continue;
      auto px = frame.pixel(y, x);
      for (int ch = 0; ch < 3; ++ch) hist[ch * kBins + px[ch] / (256 / kBins)] += 1.0f;
      ++n;
    }
  }
  if (n > 0) {
    for (auto& v : hist) v /= static_cast<float>(n);
  }
  return hist;
}

BankSet::BankSet(MemoryItem cond, LocalCueSet local, int adjacent_capacity, int scene_capacity)
    : cond_(std::move(cond)),
      local_(std::move(local)),
      adjacent_capacity_(adjacent_capacity),
      scene_capacity_(scene_capacity) {
  cond_.kind = MemoryKind::kConditional;
}

void BankSet::PushAdjacent(MemoryItem item) {
  item.kind = MemoryKind::kAdjacent;
  adjacent_.push_back(std::move(item));
  while (static_cast<int>(adjacent_.size()) > adjacent_capacity_) adjacent_.pop_front();
}

void BankSet::PushScene(MemoryItem item) {
  item.kind = MemoryKind::kScene;
  scene_.push_back(std::move(item));
  while (static_cast<int>(scene_.size()) > scene_capacity_) scene_.pop_front();
}

SegmentResult PropagateLastSegmenter::Segment(int, const Frame&, const BankView& banks, bool) {
  if (!banks.adjacent.empty()) return {banks.adjacent.back()->mask, {}};
  return {banks.cond->mask, {}};
}

OracleSegmenter::OracleSegmenter(ShotAnnotation shots, GtProvider gt, Propagator propagate)
    : shots_(std::move(shots)), gt_(std::move(gt)), propagate_(std::move(propagate)) {
  shots_.Validate();
}

SegmentResult OracleSegmenter::Segment(int frame_index, const Frame& frame,
                                       const BankView& banks, bool) {
  const int shot = shots_.SegmentOf(frame_index);
  Mask out;
  if (shots_.segments[shot].start == frame_index) {
    std::optional<Mask> gt = gt_(frame_index);
    if (!gt) {
      throw Error(ErrorCode::kMissingOracleMask,
                  "no ground truth at shot start " + std::to_string(frame_index));
    }
    out = std::move(*gt);
  } else {
    const Mask& previous = previous_ ? *previous_ : banks.cond->mask;
    out = propagate_ ? propagate_(frame_index, frame, previous, banks) : previous;
  }
  previous_ = out;
  return {std::move(out), {}};
}

void TrackerConfig::Validate() const {
  if (!(tau_tr >= 0.0 && tau_tr <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tau_tr must lie in [0, 1]");
  }
  if (adjacent_capacity < 1 || scene_capacity < 1) {
    throw Error(ErrorCode::kInvalidConfig, "bank capacities must be >= 1");
  }
  if (local.groups < 1 || local.groups > 10) {
    throw Error(ErrorCode::kInvalidConfig, "groups must lie in [1, 10]");
  }
  if (!(local.tau_p >= 0.0 && local.tau_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tau_p must lie in [0, 1]");
  }
}

TrackerTrace RunTracker(std::span<const Frame> frames, const Mask& init_mask,
                        std::span<const double> scores, Segmenter& segmenter,
                        const TrackerConfig& config) {
  config.Validate();
  if (frames.empty()) throw Error(ErrorCode::kMissingFrame, "no frames to track");
  if (scores.size() != frames.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need one score per frame");
  }
  const int h = frames[0].height();
  const int w = frames[0].width();
  if (!init_mask.same_shape(h, w)) {
    throw Error(ErrorCode::kDimensionMismatch, "initial mask does not match frames");
  }

  LocalCueSet local = BuildLocalCues(frames[0], init_mask, config.local);
  TrackerTrace trace;
  trace.local_skipped = local.skipped;
  trace.local_regions = local.skipped ? 0 : static_cast<int>(local.descriptors.size());
  BankSet banks(MemoryItem{0, MemoryKind::kConditional, init_mask,
                           DefaultPayload(frames[0], init_mask)},
                std::move(local), config.adjacent_capacity, config.scene_capacity);
  trace.masks.push_back(init_mask);
  trace.records.push_back({0, 0.0, false, Route::kNormal, 0, 0});

  for (std::size_t t = 1; t < frames.size(); ++t) {
    const double score = scores[t];
    const bool transition = score >= config.tau_tr;
    BankView view;
    view.cond = &banks.cond();
    view.local = &banks.local();
    if (transition) {
      if (!banks.adjacent().empty()) view.adjacent.push_back(&banks.adjacent().back());
      for (const auto& item : banks.scene()) view.scene.push_back(&item);
    } else {
      for (const auto& item : banks.adjacent()) view.adjacent.push_back(&item);
    }

    SegmentResult result = segmenter.Segment(static_cast<int>(t), frames[t], view, transition);
    if (!result.mask.same_shape(h, w)) {
      throw Error(ErrorCode::kContractViolation,
                  "segmenter returned a " + std::to_string(result.mask.height()) + "x" +
                      std::to_string(result.mask.width()) + " mask at frame " +
                      std::to_string(t));
    }
    if (result.payload.empty()) result.payload = DefaultPayload(frames[t], result.mask);
    MemoryItem memory{static_cast<int>(t), transition ? MemoryKind::kScene : MemoryKind::kAdjacent,
                      result.mask,
                      std::move(result.payload)};
    if (transition) {
      banks.PushScene(std::move(memory));
    } else {
      banks.PushAdjacent(std::move(memory));
    }
    trace.masks.push_back(std::move(result.mask));
    trace.records.push_back({static_cast<int>(t), score, transition,
                             transition ? Route::kTransition : Route::kNormal,
                             static_cast<int>(banks.adjacent().size()),
                             static_cast<int>(banks.scene().size())});
  }
  return trace;
}

TrackerTrace RunTracker(std::span<const Frame> frames, const Mask& init_mask,
                        const TransitionScorer& scorer, Segmenter& segmenter,
                        const TrackerConfig& config) {
  const auto scores = ScoreFrames(frames, scorer);
  return RunTracker(frames, init_mask, scores, segmenter, config);
}

nlohmann::json TrackerTrace::ToJson() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    recs.push_back({{"frame", r.frame},
                    {"score", r.score},
                    {"transition", r.transition},
                    {"route", RouteName(r.route)},
                    {"adjacent_size", r.adjacent_size},
                    {"scene_size", r.scene_size}});
  }
  return {{"records", recs}, {"local_skipped", local_skipped}, {"local_regions", local_regions}};
}

}  // namespace cutvos
