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

#include "run.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "cutvos/error.hpp"
#include "cutvos/image_io.hpp"

namespace cutvos::cli {

namespace fs = std::filesystem;

nlohmann::json ParamSet::Resolve(const nlohmann::json& file) {
  nlohmann::json resolved = defaults_;
  file_ = nlohmann::json::object();
  flags_ = nlohmann::json::object();
  if (!file.is_null()) {
    if (!file.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be an object");
    for (const auto& [key, value] : file.items()) {
      if (!defaults_.contains(key)) throw Error(ErrorCode::kInvalidConfig, "unknown key " + key);
      const auto& def = defaults_[key];
      const bool numeric = def.is_number() && value.is_number();
      if (def.type() != value.type() && !numeric) {
        throw Error(ErrorCode::kInvalidConfig, "bad value type for " + key);
      }
      file_[key] = value;
    }
  }
  for (const auto& e : entries_) {
    if (e.option->count() > 0) {
      flags_[e.key] = e.value();
      resolved[e.key] = flags_[e.key];
      sources_[e.key] = "flag";
    } else if (file_.contains(e.key)) {
      resolved[e.key] = file_[e.key];
      sources_[e.key] = "file";
    } else {
      sources_[e.key] = "default";
    }
  }
  return resolved;
}

nlohmann::json LoadConfigSection(const std::string& path, const std::string& command) {
  if (path.empty()) return nullptr;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, path + ": expected an object");
  if (j.contains("command") && j.contains("config") && j.contains("version")) {
    if (j["command"] != command) {
      throw Error(ErrorCode::kInvalidConfig,
                  path + ": manifest is for " + j["command"].get<std::string>());
    }
    return j["config"];
  }
  if (j.contains(command) && j[command].is_object()) return j[command];
  return j;
}

nlohmann::json RunManifest::ToJson() const {
  return {{"command", command},
          {"version", version},
          {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
          {"config", config},
          {"config_layers", layers},
          {"config_sources", sources},
          {"inputs", inputs},
          {"out_dir", out_dir.string()},
          {"outputs", outputs},
          {"videos", videos},
          {"jobs", jobs},
          {"duration_s", duration_s}};
}

RunManifest RunManifest::FromJson(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    if (!j.at("seed").is_null()) m.seed = j["seed"].get<std::uint64_t>();
    m.config = j.at("config");
    m.layers = j.value("config_layers", nlohmann::json::object());
    m.sources = j.value("config_sources", nlohmann::json::object());
    m.inputs = j.at("inputs");
    m.out_dir = j.at("out_dir").get<std::string>();
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.videos = j.value("videos", std::vector<std::string>{});
    m.jobs = j.value("jobs", 1);
    m.duration_s = j.value("duration_s", 0.0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("manifest: ") + e.what());
  }
}

void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<VideoEntry> SelectVideos(const fs::path& root, const std::vector<std::string>& only,
                                     double default_fps) {
  auto entries = ScanDataset(root, default_fps);
  if (only.empty()) return entries;
  const std::set<std::string> wanted(only.begin(), only.end());
  std::vector<VideoEntry> selected;
  for (auto& e : entries) {
    if (wanted.contains(e.id)) selected.push_back(std::move(e));
  }
  if (selected.size() != wanted.size()) {
    throw Error(ErrorCode::kMissingFrame, "requested video not found under " + root.string());
  }
  return selected;
}

ShotAnnotation ShotsFor(const VideoEntry& entry, int length, const std::string& shots_dir) {
  if (!shots_dir.empty()) {
    const fs::path p = fs::path(shots_dir) / (entry.id + ".json");
    if (!fs::exists(p)) throw Error(ErrorCode::kIoError, "missing " + p.string());
    return LoadShotAnnotation(p, length);
  }
  if (entry.shots_path) return LoadShotAnnotation(*entry.shots_path, length);
  return ShotAnnotation::Single(length);
}

std::vector<fs::path> PredictionPaths(const fs::path& dir, const std::string& video_id) {
  static const std::vector<std::string> kPng = {".png"};
  for (const fs::path& candidate : {dir / "Annotations" / video_id, dir / video_id}) {
    if (fs::is_directory(candidate)) return io::ListImages(candidate, kPng);
  }
  throw Error(ErrorCode::kMissingFrame, "no predictions for " + video_id + " under " + dir.string());
}

void WriteJson(const fs::path& path, const nlohmann::json& j) {
  io::WriteFileAtomic(path, j.dump(2) + "\n");
}

std::vector<Frame> DiskDonors::Fetch(std::size_t index, int start, int count) const {
  const auto& paths = videos_.at(index)->frame_paths;
  if (start < 0 || count < 0 || start + count > static_cast<int>(paths.size())) {
    throw Error(ErrorCode::kOutOfRange, "donor fetch out of range");
  }
  std::vector<Frame> frames;
  frames.reserve(count);
  for (int i = start; i < start + count; ++i) frames.push_back(io::ReadFrame(paths[i]));
  return frames;
}

}  // namespace cutvos::cli
