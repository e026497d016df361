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

#ifndef CUTVOS_DATASET_HPP_
#define CUTVOS_DATASET_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/image.hpp"

namespace cutvos {

inline constexpr double kDefaultFps = 24.0;

/// T aligned (frame, mask) pairs for one object track.
struct FrameSequenceSample {
  std::string video_id;
  std::vector<Frame> frames;
  std::vector<Mask> masks;
  int object_id = 1;
  double fps = kDefaultFps;

  int length() const noexcept { return static_cast<int>(frames.size()); }
  int height() const noexcept { return frames.empty() ? 0 : frames.front().height(); }
  int width() const noexcept { return frames.empty() ? 0 : frames.front().width(); }

  /// Checks shape agreement, T >= 1 and that every nonzero mask pixel is
  /// `object_id`. Does not require a nonempty track.
  void Validate() const;
};

enum class TransitionType {
  kCutIn,
  kCutAway,
  kDelayedCutIn,
  kCloseUpView,
  kDistantView,
  kPitchTransformation,
  kHorizonTransformation,
  kSceneChange,
  kInsignificance,
};

inline constexpr std::array<TransitionType, 9> kAllTransitionTypes = {
    TransitionType::kCutIn,          TransitionType::kCutAway,
    TransitionType::kDelayedCutIn,   TransitionType::kCloseUpView,
    TransitionType::kDistantView,    TransitionType::kPitchTransformation,
    TransitionType::kHorizonTransformation, TransitionType::kSceneChange,
    TransitionType::kInsignificance};

/// Cut in, cut away and delayed cut in change whether the target is visible;
/// everything else changes the viewpoint.
bool IsPresenceType(TransitionType type);
std::string_view TransitionTypeName(TransitionType type);
/// Throws UnknownTransitionType.
TransitionType ParseTransitionType(std::string_view name);

/// Half-open frame range [start, end) with at most one presence and one view
/// label describing the transition into it.
struct ShotSegment {
  int start = 0;
  int end = 0;
  std::optional<TransitionType> presence;
  std::optional<TransitionType> view;

  int length() const noexcept { return end - start; }
  bool has_type(TransitionType t) const { return presence == t || view == t; }
  friend bool operator==(const ShotSegment&, const ShotSegment&) = default;
};

struct ShotAnnotation {
  std::vector<ShotSegment> segments;

  int length() const noexcept { return segments.empty() ? 0 : segments.back().end; }
  int shot_count() const noexcept { return static_cast<int>(segments.size()); }
  /// Index of the segment that contains `frame`.
  int SegmentOf(int frame) const;

  /// Requires a contiguous, non-empty partition of [0, T) into non-empty
  /// segments. When `expected_length` is given T must equal it.
  void Validate(std::optional<int> expected_length = std::nullopt) const;

  static ShotAnnotation FromJson(const nlohmann::json& j,
                                 std::optional<int> expected_length = std::nullopt);
  nlohmann::json ToJson() const;

  /// A single untyped segment covering [0, length).
  static ShotAnnotation Single(int length);

  friend bool operator==(const ShotAnnotation&, const ShotAnnotation&) = default;
};

/// Loads frames (.jpg/.jpeg/.png) and label masks (.png) from two
/// directories, in lexicographic order. Mask labels other than `object_id`
/// are zeroed.
FrameSequenceSample LoadSample(const std::filesystem::path& frames_dir,
                               const std::filesystem::path& masks_dir,
                               int object_id, double fps = kDefaultFps);

ShotAnnotation LoadShotAnnotation(const std::filesystem::path& path,
                                  std::optional<int> expected_length = std::nullopt);
void SaveShotAnnotation(const std::filesystem::path& path, const ShotAnnotation& shots);

// ---- dataset index & statistics -------------------------------------------

struct ObjectRecord {
  int id = 0;
  std::string category = "unknown";
  int n_masks = 0;          // frames where the object is visible
  int n_shots_present = 0;  // shots containing at least one visible frame
};

/// Everything `ComputeStats` needs about one video.
struct VideoRecord {
  std::string id;
  int n_frames = 0;
  double fps = kDefaultFps;
  ShotAnnotation shots;
  std::vector<ObjectRecord> objects;

  double duration_s() const { return n_frames / fps; }
};

struct DatasetStats {
  int n_videos = 0;
  int n_objects = 0;
  int n_masks = 0;
  /// Shots counted once per video.
  int n_shots = 0;
  /// Shots counted once per object that appears in them.
  int n_shots_per_target = 0;
  double mean_shots_per_video = 0.0;
  double mean_duration_s = 0.0;
  /// Mean over videos of (shots - 1) / duration.
  double transition_frequency = 0.0;
  std::map<std::string, int> category_histogram;
};

/// Order-independent: records are folded in video-id order.
DatasetStats ComputeStats(std::span<const VideoRecord> videos);
nlohmann::json ToJson(const DatasetStats& stats);

/// On-disk layout of one video:
///   <root>/JPEGImages/<video>/NNNNN.jpg
///   <root>/Annotations/<video>/NNNNN.png
///   <root>/shots/<video>.json          (optional)
///   <root>/meta.json                   (optional; fps and categories)
struct VideoEntry {
  std::string id;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<std::filesystem::path> mask_paths;
  std::optional<std::filesystem::path> shots_path;
  double fps = kDefaultFps;
  std::map<int, std::string> categories;
};

/// Enumerates videos under `root` sorted by id. Masks may be absent (prediction
/// trees, raw videos); a count mismatch is reported by the loaders.
std::vector<VideoEntry> ScanDataset(const std::filesystem::path& root,
                                    double default_fps = kDefaultFps);

/// Reads every mask of the video and counts objects, visible frames and
/// shots. Without a shots file the video is a single shot.
VideoRecord BuildVideoRecord(const VideoEntry& entry);

/// Label ids (nonzero) present anywhere in the masks, ascending.
std::vector<int> ObjectIds(std::span<const Mask> masks);

/// Loads a full video with masks filtered to `object_id`.
FrameSequenceSample LoadVideoSample(const VideoEntry& entry, int object_id);

/// Raw label masks of a video (all objects).
std::vector<Mask> LoadLabelMasks(std::span<const std::filesystem::path> paths);

/// Keeps only pixels equal to `object_id`.
Mask FilterObject(const Mask& labels, int object_id);

}  // namespace cutvos

#endif  // CUTVOS_DATASET_HPP_
