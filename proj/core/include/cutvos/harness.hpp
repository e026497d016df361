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

#ifndef CUTVOS_HARNESS_HPP_
#define CUTVOS_HARNESS_HPP_

#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/dataset.hpp"
#include "cutvos/image.hpp"
#include "cutvos/localcues.hpp"
#include "cutvos/shotdetect.hpp"

namespace cutvos {

enum class MemoryKind { kConditional, kAdjacent, kScene, kLocalCue };
std::string_view MemoryKindName(MemoryKind kind);

struct MemoryItem {
  int frame_index = 0;
  MemoryKind kind = MemoryKind::kAdjacent;
  /// The mask the memory was encoded from.
  Mask mask;
  /// Opaque descriptor; by default an 8-bin-per-channel colour histogram of
  /// the masked pixels.
  std::vector<float> payload;
};

/// Masked colour histogram used as the default memory payload.
std::vector<float> DefaultPayload(const Frame& frame, const Mask& mask);

/// Memory banks of one tracker run. `cond` is fixed at frame 0; `adjacent`
/// and `scene` are FIFO queues bounded by their capacities.
class BankSet {
 public:
  BankSet(MemoryItem cond, LocalCueSet local, int adjacent_capacity, int scene_capacity);

  const MemoryItem& cond() const { return cond_; }
  const std::deque<MemoryItem>& adjacent() const { return adjacent_; }
  const std::deque<MemoryItem>& scene() const { return scene_; }
  const LocalCueSet& local() const { return local_; }
  int adjacent_capacity() const { return adjacent_capacity_; }
  int scene_capacity() const { return scene_capacity_; }

  void PushAdjacent(MemoryItem item);
  void PushScene(MemoryItem item);

 private:
  MemoryItem cond_;
  LocalCueSet local_;
  int adjacent_capacity_;
  int scene_capacity_;
  std::deque<MemoryItem> adjacent_;
  std::deque<MemoryItem> scene_;
};

/// What a segmenter may read on a given route. Normal frames see the
/// conditional memory, every adjacent memory and the local cues; transition
/// frames see the conditional memory, the scene memories, the local cues and
/// only the most recent adjacent memory.
struct BankView {
  const MemoryItem* cond = nullptr;
  std::vector<const MemoryItem*> adjacent;  // oldest first
  std::vector<const MemoryItem*> scene;     // oldest first
  const LocalCueSet* local = nullptr;
};

struct SegmentResult {
  Mask mask;
  std::vector<float> payload;  // empty: the harness fills in DefaultPayload
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual SegmentResult Segment(int frame_index, const Frame& frame, const BankView& banks,
                                bool transition) = 0;
};

/// Returns the newest adjacent mask, else the conditional mask.
class PropagateLastSegmenter final : public Segmenter {
 public:
  SegmentResult Segment(int frame_index, const Frame& frame, const BankView& banks,
                        bool transition) override;
};

/// Ground truth at every shot start; inside a shot, `propagate` (default:
/// repeat this segmenter's previous output).
class OracleSegmenter final : public Segmenter {
 public:
  using GtProvider = std::function<std::optional<Mask>(int frame_index)>;
  using Propagator = std::function<Mask(int frame_index, const Frame& frame,
                                        const Mask& previous, const BankView& banks)>;

  OracleSegmenter(ShotAnnotation shots, GtProvider gt, Propagator propagate = {});

  SegmentResult Segment(int frame_index, const Frame& frame, const BankView& banks,
                        bool transition) override;

 private:
  ShotAnnotation shots_;
  GtProvider gt_;
  Propagator propagate_;
  std::optional<Mask> previous_;
};

enum class Route { kNormal, kTransition };
std::string_view RouteName(Route route);

struct TrackerConfig {
  double tau_tr = 0.5;
  int adjacent_capacity = 6;
  int scene_capacity = 4;
  LocalCueOptions local;

  void Validate() const;
};

struct FrameRecord {
  int frame = 0;
  double score = 0.0;
  bool transition = false;
  Route route = Route::kNormal;
  int adjacent_size = 0;
  int scene_size = 0;
};

struct TrackerTrace {
  std::vector<FrameRecord> records;
  std::vector<Mask> masks;
  bool local_skipped = true;
  int local_regions = 0;

  nlohmann::json ToJson() const;
};

/// Online routing over precomputed per-frame scores (scores[0] is ignored).
/// Frame 0 seeds the conditional and local banks from `init_mask`; later
/// frames go Normal (score < tau_tr, memory into the adjacent FIFO) or
/// Transition (memory into the scene FIFO).
TrackerTrace RunTracker(std::span<const Frame> frames, const Mask& init_mask,
                        std::span<const double> scores, Segmenter& segmenter,
                        const TrackerConfig& config);

/// Scores with `scorer` first.
TrackerTrace RunTracker(std::span<const Frame> frames, const Mask& init_mask,
                        const TransitionScorer& scorer, Segmenter& segmenter,
                        const TrackerConfig& config);

}  // namespace cutvos

#endif  // CUTVOS_HARNESS_HPP_
