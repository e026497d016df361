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

#ifndef CUTVOS_TMA_HPP_
#define CUTVOS_TMA_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/dataset.hpp"
#include "cutvos/imgops.hpp"
#include "cutvos/rng.hpp"

namespace cutvos {

/// Transition-mimicking augmentation settings. Probability defaults are the
/// balanced configuration used for training (0.60, 0.60, 0.70, 0.40, 0.75,
/// 0.55).
struct TmaConfig {
  double p_trans = 0.60;
  double p_once = 0.60;
  double p_cut = 0.70;
  double p_same = 0.40;
  double p_copy = 0.75;
  double p_hflip = 0.55;
  int clip_length = 8;
  AffineRange moderate = AffineRange::Moderate();
  AffineRange strong = AffineRange::Strong();
  /// Extra attempts when an augmented clip has no visible foreground at all.
  int resample_limit = 0;
  /// Same-video offsets are weighted by distance^exponent.
  double distance_exponent = 1.0;
  /// Half-width of the uniform base shift (fraction of width / height) for
  /// the gradual translation in copy mode.
  double gtranslation_max = 1.0;
  /// Resize donors to the sample size; otherwise size mismatch is an error.
  bool resize_donors = true;
  std::optional<std::uint64_t> seed;

  void Validate() const;

  /// Accepts nested (`{"affine": {"moderate": {...}}}`) or dotted
  /// (`"affine.moderate.rotation"`) keys; unknown keys are InvalidConfig.
  static TmaConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

/// Random access to clips of other videos.
class DonorSource {
 public:
  virtual ~DonorSource() = default;
  virtual std::size_t size() const = 0;
  virtual std::string id(std::size_t index) const = 0;
  virtual int length(std::size_t index) const = 0;
  /// Frames [start, start + count) of donor `index`.
  virtual std::vector<Frame> Fetch(std::size_t index, int start, int count) const = 0;
};

class InMemoryDonors final : public DonorSource {
 public:
  explicit InMemoryDonors(std::vector<FrameSequenceSample> samples)
      : samples_(std::move(samples)) {}

  std::size_t size() const override { return samples_.size(); }
  std::string id(std::size_t index) const override { return samples_.at(index).video_id; }
  int length(std::size_t index) const override { return samples_.at(index).length(); }
  std::vector<Frame> Fetch(std::size_t index, int start, int count) const override;

 private:
  std::vector<FrameSequenceSample> samples_;
};

/// The full video the sample was cut from. `current_start` is the timeline
/// index of the sample's first frame.
struct VideoTimeline {
  std::span<const Frame> frames;
  std::span<const Mask> masks;
  int current_start = 0;
};

/// Non-owning; both members must outlive the apply call.
struct DonorPool {
  const DonorSource* foreign = nullptr;
  std::optional<VideoTimeline> timeline;
};

struct SameVideoSegment {
  int offset = 0;
  std::vector<Frame> frames;
  std::vector<Mask> masks;
};

/// Draws a `length`-frame window of the timeline whose start offset o is
/// chosen with weight |o - current_start|^exponent. The current window itself
/// (distance 0) is never chosen.
SameVideoSegment SampleSameVideoSegment(const VideoTimeline& timeline, int length,
                                        Rng& rng, double exponent = 1.0);

struct ProvenanceEntry {
  std::string op;
  nlohmann::json params = nlohmann::json::object();
  int begin = 0;  // frame range [begin, end) touched
  int end = 0;
  std::string donor;

  friend bool operator==(const ProvenanceEntry&, const ProvenanceEntry&) = default;
};

/// Branch outcomes, in draw order. Later flags are only meaningful when the
/// branch that guards them was taken.
struct TmaDecisions {
  bool transitioned = false;
  bool once = false;
  bool cut = false;
  bool same_video = false;
  bool copy = false;
  bool hflip = false;

  friend bool operator==(const TmaDecisions&, const TmaDecisions&) = default;
};

/// Where an output frame came from.
struct FrameOrigin {
  std::string source;
  int frame = 0;

  friend bool operator==(const FrameOrigin&, const FrameOrigin&) = default;
};

struct TmaOutcome {
  FrameSequenceSample sample;
  /// True at the first frame of every synthetic shot; never at frame 0.
  std::vector<bool> transition_labels;
  std::vector<ProvenanceEntry> provenance;
  std::vector<FrameOrigin> origins;
  TmaDecisions decisions;
  int window_begin = 0;
  int window_end = 0;

  std::vector<int> LabelIndices() const;
  /// Labels, decisions, window and operation log.
  nlohmann::json ProvenanceJson() const;
};

/// Synthesises a multi-shot clip from a single-shot sample. The random draw
/// order is fixed:
///   trans, once, cut, [same, copy, donor..., moderate affine, base shift]
///   or [strong affine per frame], hflip.
TmaOutcome ApplyTma(const FrameSequenceSample& sample, const DonorPool& donors,
                    const TmaConfig& config, Rng& rng);

void to_json(nlohmann::json& j, const ProvenanceEntry& e);

}  // namespace cutvos

#endif  // CUTVOS_TMA_HPP_
