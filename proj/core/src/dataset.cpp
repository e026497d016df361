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

#include "cutvos/dataset.hpp"

#include <algorithm>
#include <set>

#include "cutvos/error.hpp"
#include "cutvos/image_io.hpp"

namespace cutvos {
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kFrameExtensions = {".jpg", ".jpeg", ".png"};
const std::vector<std::string> kMaskExtensions = {".png"};

constexpr std::array<std::string_view, 9> kTypeNames = {
    "CutIn",       "CutAway",   "DelayedCutIn",
    "CloseUpView", "DistantView", "PitchTransformation",
    "HorizonTransformation", "SceneChange", "Insignificance"};

FrameSequenceSample AssembleSample(std::string video_id,
                                   std::span<const fs::path> frame_paths,
                                   std::span<const fs::path> mask_paths,
                                   int object_id, double fps) {
  if (object_id <= 0 || object_id > 255) {
    throw Error(ErrorCode::kInvalidArgument, "object id must lie in [1, 255]");
  }
  if (frame_paths.size() != mask_paths.size()) {
    throw Error(ErrorCode::kMissingFrame,
                video_id + ": " + std::to_string(frame_paths.size()) + " frames but " +
                    std::to_string(mask_paths.size()) + " masks");
  }
  if (frame_paths.empty()) {
    throw Error(ErrorCode::kMissingFrame, video_id + ": no frames");
  }
  FrameSequenceSample sample;
  sample.video_id = std::move(video_id);
  sample.object_id = object_id;
  sample.fps = fps;
  bool any_foreground = false;
  for (std::size_t i = 0; i < frame_paths.size(); ++i) {
    Frame frame = io::ReadFrame(frame_paths[i]);
    Mask mask = FilterObject(io::ReadLabelPng(mask_paths[i]), object_id);
    if (!frame.same_shape(mask) ||
        (!sample.frames.empty() && !frame.same_shape(sample.frames.front()))) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "size mismatch at " + frame_paths[i].string() + " / " +
                      mask_paths[i].string());
    }
    any_foreground = any_foreground || !IsEmpty(mask);
    sample.frames.push_back(std::move(frame));
    sample.masks.push_back(std::move(mask));
  }
  if (!any_foreground) {
    throw Error(ErrorCode::kEmptyTrack, sample.video_id + ": object " +
                                            std::to_string(object_id) +
                                            " never visible");
  }
  return sample;
}

}  // namespace

void FrameSequenceSample::Validate() const {
  if (frames.empty()) throw Error(ErrorCode::kMissingFrame, "sample has no frames");
  if (frames.size() != masks.size()) {
    throw Error(ErrorCode::kMissingFrame, "frame and mask counts differ");
  }
  if (object_id <= 0 || object_id > 255) {
    throw Error(ErrorCode::kInvalidArgument, "object id must lie in [1, 255]");
  }
  if (!(fps > 0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  const int h = height();
  const int w = width();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!frames[i].same_shape(h, w) || !masks[i].same_shape(h, w)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "frame " + std::to_string(i) + " differs in size");
    }
    for (auto v : masks[i].data()) {
      if (v != 0 && v != object_id) {
        throw Error(ErrorCode::kInvalidArgument,
                    "mask " + std::to_string(i) + " holds a foreign label");
      }
    }
  }
}

bool IsPresenceType(TransitionType type) {
  return type == TransitionType::kCutIn || type == TransitionType::kCutAway ||
         type == TransitionType::kDelayedCutIn;
}

std::string_view TransitionTypeName(TransitionType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

TransitionType ParseTransitionType(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<TransitionType>(i);
  }
  throw Error(ErrorCode::kUnknownTransitionType, std::string(name));
}

int ShotAnnotation::SegmentOf(int frame) const {
  auto it = std::upper_bound(segments.begin(), segments.end(), frame,
                             [](int f, const ShotSegment& s) { return f < s.end; });
  if (frame < 0 || it == segments.end()) {
    throw Error(ErrorCode::kOutOfRangeIndex, "frame " + std::to_string(frame));
  }
  return static_cast<int>(it - segments.begin());
}

void ShotAnnotation::Validate(std::optional<int> expected_length) const {
  if (segments.empty()) throw Error(ErrorCode::kEmptyShotList, "no shot segments");
  int cursor = 0;
  for (const auto& seg : segments) {
    if (seg.start < 0 || seg.end < 0 ||
        (expected_length && (seg.start > *expected_length || seg.end > *expected_length))) {
      throw Error(ErrorCode::kOutOfRangeIndex,
                  "segment [" + std::to_string(seg.start) + ", " +
                      std::to_string(seg.end) + ") out of range");
    }
    if (seg.start != cursor || seg.end <= seg.start) {
      throw Error(ErrorCode::kGapOrOverlap,
                  "segment [" + std::to_string(seg.start) + ", " +
                      std::to_string(seg.end) + ") does not continue at " +
                      std::to_string(cursor));
    }
    if (seg.presence && !IsPresenceType(*seg.presence)) {
      throw Error(ErrorCode::kUnknownTransitionType,
                  std::string(TransitionTypeName(*seg.presence)) + " is not a presence type");
    }
    if (seg.view && IsPresenceType(*seg.view)) {
      throw Error(ErrorCode::kUnknownTransitionType,
                  std::string(TransitionTypeName(*seg.view)) + " is not a view type");
    }
    cursor = seg.end;
  }
  if (expected_length && cursor != *expected_length) {
    throw Error(ErrorCode::kGapOrOverlap, "segments end at " + std::to_string(cursor) +
                                              ", expected " +
                                              std::to_string(*expected_length));
  }
}

ShotAnnotation ShotAnnotation::FromJson(const nlohmann::json& j,
                                        std::optional<int> expected_length) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, "shot file must be an array");
  ShotAnnotation shots;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("start") || !item.contains("end") ||
        !item["start"].is_number_integer() || !item["end"].is_number_integer()) {
      throw Error(ErrorCode::kParseError, "segment needs integer start/end");
    }
    ShotSegment seg;
    seg.start = item["start"].get<int>();
    seg.end = item["end"].get<int>();
    auto read_type = [&](const char* key) -> std::optional<TransitionType> {
      if (!item.contains(key) || item[key].is_null()) return std::nullopt;
      if (!item[key].is_string()) {
        throw Error(ErrorCode::kParseError, std::string(key) + " must be string or null");
      }
      return ParseTransitionType(item[key].get<std::string>());
    };
    seg.presence = read_type("presence");
    seg.view = read_type("view");
    shots.segments.push_back(seg);
  }
  shots.Validate(expected_length);
  return shots;
}

nlohmann::json ShotAnnotation::ToJson() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& seg : segments) {
    nlohmann::json item = {{"start", seg.start}, {"end", seg.end}};
    item["presence"] = seg.presence ? nlohmann::json(TransitionTypeName(*seg.presence))
                                    : nlohmann::json(nullptr);
    item["view"] =
        seg.view ? nlohmann::json(TransitionTypeName(*seg.view)) : nlohmann::json(nullptr);
    out.push_back(std::move(item));
  }
  return out;
}

ShotAnnotation ShotAnnotation::Single(int length) {
  if (length <= 0) throw Error(ErrorCode::kInvalidArgument, "length must be positive");
  return ShotAnnotation{{ShotSegment{0, length, std::nullopt, std::nullopt}}};
}

FrameSequenceSample LoadSample(const fs::path& frames_dir, const fs::path& masks_dir,
                               int object_id, double fps) {
  const auto frames = io::ListImages(frames_dir, kFrameExtensions);
  const auto masks = io::ListImages(masks_dir, kMaskExtensions);
  return AssembleSample(frames_dir.filename().string(), frames, masks, object_id, fps);
}

ShotAnnotation LoadShotAnnotation(const fs::path& path, std::optional<int> expected_length) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return ShotAnnotation::FromJson(j, expected_length);
}

void SaveShotAnnotation(const fs::path& path, const ShotAnnotation& shots) {
  io::WriteFileAtomic(path, shots.ToJson().dump(2) + "\n");
}

DatasetStats ComputeStats(std::span<const VideoRecord> videos) {
  std::vector<const VideoRecord*> ordered;
  ordered.reserve(videos.size());
  for (const auto& v : videos) ordered.push_back(&v);
  std::sort(ordered.begin(), ordered.end(),
            [](const VideoRecord* a, const VideoRecord* b) { return a->id < b->id; });

  DatasetStats stats;
  double freq_sum = 0.0;
  double duration_sum = 0.0;
  for (const VideoRecord* v : ordered) {
    if (!(v->fps > 0) || v->n_frames <= 0) {
      throw Error(ErrorCode::kZeroDuration, v->id + " has zero duration");
    }
    const int shots = v->shots.shot_count() == 0 ? 1 : v->shots.shot_count();
    stats.n_videos += 1;
    stats.n_shots += shots;
    stats.n_objects += static_cast<int>(v->objects.size());
    for (const auto& obj : v->objects) {
      stats.n_masks += obj.n_masks;
      stats.n_shots_per_target += obj.n_shots_present;
      stats.category_histogram[obj.category] += 1;
    }
    duration_sum += v->duration_s();
    freq_sum += (shots - 1) / v->duration_s();
  }
  if (stats.n_videos > 0) {
    stats.mean_shots_per_video = static_cast<double>(stats.n_shots) / stats.n_videos;
    stats.mean_duration_s = duration_sum / stats.n_videos;
    stats.transition_frequency = freq_sum / stats.n_videos;
  }
  return stats;
}

nlohmann::json ToJson(const DatasetStats& stats) {
  return {{"n_videos", stats.n_videos},
          {"n_objects", stats.n_objects},
          {"n_masks", stats.n_masks},
          {"n_shots", stats.n_shots},
          {"n_shots_per_target", stats.n_shots_per_target},
          {"mean_shots_per_video", stats.mean_shots_per_video},
          {"mean_duration_s", stats.mean_duration_s},
          {"transition_frequency", stats.transition_frequency},
          {"category_histogram", stats.category_histogram}};
}

std::vector<VideoEntry> ScanDataset(const fs::path& root, double default_fps) {
  const fs::path frames_root = root / "JPEGImages";
  if (!fs::is_directory(frames_root)) {
    throw Error(ErrorCode::kIoError, "missing " + frames_root.string());
  }
  nlohmann::json meta = nlohmann::json::object();
  if (fs::exists(root / "meta.json")) {
    try {
      meta = nlohmann::json::parse(io::ReadFile(root / "meta.json"));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, "meta.json: " + std::string(e.what()));
    }
  }
  std::vector<VideoEntry> entries;
  for (const auto& dir : fs::directory_iterator(frames_root)) {
    if (!dir.is_directory()) continue;
    VideoEntry e;
    e.id = dir.path().filename().string();
    e.frame_paths = io::ListImages(dir.path(), kFrameExtensions);
    const fs::path mask_dir = root / "Annotations" / e.id;
    if (fs::is_directory(mask_dir)) e.mask_paths = io::ListImages(mask_dir, kMaskExtensions);
    const fs::path shots = root / "shots" / (e.id + ".json");
    if (fs::exists(shots)) e.shots_path = shots;
    e.fps = default_fps;
    if (meta.contains(e.id)) {
      const auto& m = meta[e.id];
      e.fps = m.value("fps", default_fps);
      if (m.contains("categories")) {
        for (const auto& [k, v] : m["categories"].items()) {
          e.categories[std::stoi(k)] = v.get<std::string>();
        }
      }
    }
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const VideoEntry& a, const VideoEntry& b) { return a.id < b.id; });
  return entries;
}

std::vector<Mask> LoadLabelMasks(std::span<const fs::path> paths) {
  std::vector<Mask> masks;
  masks.reserve(paths.size());
  for (const auto& p : paths) masks.push_back(io::ReadLabelPng(p));
  return masks;
}

std::vector<int> ObjectIds(std::span<const Mask> masks) {
  std::set<int> ids;
  for (const auto& m : masks) {
    for (auto v : m.data()) {
      if (v != 0) ids.insert(v);
    }
  }
  return {ids.begin(), ids.end()};
}

Mask FilterObject(const Mask& labels, int object_id) {
  Mask out = labels;
  for (auto& v : out.data()) {
    if (v != object_id) v = 0;
  }
  return out;
}

VideoRecord BuildVideoRecord(const VideoEntry& entry) {
  VideoRecord rec;
  rec.id = entry.id;
  rec.n_frames = static_cast<int>(entry.frame_paths.size());
  rec.fps = entry.fps;
  if (!entry.mask_paths.empty() && entry.mask_paths.size() != entry.frame_paths.size()) {
    throw Error(ErrorCode::kMissingFrame, entry.id + ": frame/mask count mismatch");
  }
  rec.shots = entry.shots_path ? LoadShotAnnotation(*entry.shots_path, rec.n_frames)
                               : ShotAnnotation::Single(std::max(rec.n_frames, 1));
  const auto masks = LoadLabelMasks(entry.mask_paths);
  for (int id : ObjectIds(masks)) {
    ObjectRecord obj;
    obj.id = id;
    if (auto it = entry.categories.find(id); it != entry.categories.end()) {
      obj.category = it->second;
    }
    std::vector<bool> visible(masks.size(), false);
    for (std::size_t t = 0; t < masks.size(); ++t) {
      visible[t] = std::any_of(masks[t].data().begin(), masks[t].data().end(),
                               [id](std::uint8_t v) { return v == id; });
      obj.n_masks += visible[t];
    }
    for (const auto& seg : rec.shots.segments) {
      for (int t = seg.start; t < seg.end; ++t) {
        if (visible[t]) {
          obj.n_shots_present += 1;
          break;
        }
      }
    }
    rec.objects.push_back(std::move(obj));
  }
  return rec;
}

FrameSequenceSample LoadVideoSample(const VideoEntry& entry, int object_id) {
  return AssembleSample(entry.id, entry.frame_paths, entry.mask_paths, object_id, entry.fps);
}

}  // namespace cutvos
