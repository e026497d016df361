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

// Shared plumbing for subcommands: layered config, run manifest, parallel
// per-video loop, disk-backed donors.

#ifndef CUTVOS_CLI_RUN_HPP_
#define CUTVOS_CLI_RUN_HPP_

#include <CLI11.hpp>

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/dataset.hpp"
#include "cutvos/tma.hpp"

namespace cutvos::cli {

inline constexpr const char* kSeedEnv = "CUTVOS_SEED";
inline constexpr const char* kManifestFile = "manifest.json";

struct GlobalOptions {
  bool json = false;
  int jobs = 1;
  std::filesystem::path out = "cutvos_out";
  std::vector<std::string> videos;
  std::string config_file;
};

/// Command parameters resolved with precedence flag > config file > default.
/// Every value is materialized and its source recorded.
class ParamSet {
 public:
  template <typename T>
  CLI::Option* Add(CLI::App* app, const std::string& flag, const std::string& key, T& var,
                   const std::string& help) {
    defaults_[key] = var;
    CLI::Option* opt = app->add_option(flag, var, help)->capture_default_str();
    entries_.push_back({key, opt, [&var] { return nlohmann::json(var); }});
    return opt;
  }

  /// Applies the layers; returns the resolved object. `file` is the command's
  /// section of the config file (may be null).
  nlohmann::json Resolve(const nlohmann::json& file);

  const nlohmann::json& defaults() const { return defaults_; }
  const nlohmann::json& file_layer() const { return file_; }
  const nlohmann::json& flag_layer() const { return flags_; }
  const nlohmann::json& sources() const { return sources_; }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<nlohmann::json()> value;
  };
  std::vector<Entry> entries_;
  nlohmann::json defaults_ = nlohmann::json::object();
  nlohmann::json file_ = nlohmann::json::object();
  nlohmann::json flags_ = nlohmann::json::object();
  nlohmann::json sources_ = nlohmann::json::object();
};

/// Reads the config file and returns the section for `command`. A file with a
/// top-level object named after the command uses that object; a run manifest
/// uses its resolved config; otherwise the whole file applies.
nlohmann::json LoadConfigSection(const std::string& path, const std::string& command);

struct RunManifest {
  std::string command;
  std::string version = CUTVOS_VERSION;
  std::optional<std::uint64_t> seed;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json layers = nlohmann::json::object();
  nlohmann::json sources = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::object();
  std::filesystem::path out_dir;
  std::vector<std::string> outputs;
  std::vector<std::string> videos;
  int jobs = 1;
  double duration_s = 0.0;

  nlohmann::json ToJson() const;
  static RunManifest FromJson(const nlohmann::json& j);
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
/// thrown is rethrown after all workers stop.
void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Dataset videos, optionally restricted to `only` (unknown ids are an error).
std::vector<VideoEntry> SelectVideos(const std::filesystem::path& root,
                                     const std::vector<std::string>& only,
                                     double default_fps = kDefaultFps);

/// Shot annotation for a video: `<shots_dir>/<id>.json` when shots_dir is set,
/// otherwise the dataset's own file, otherwise a single shot.
ShotAnnotation ShotsFor(const VideoEntry& entry, int length, const std::string& shots_dir);

/// Label-mask paths for `video_id` under a prediction root, accepting either
/// `<dir>/Annotations/<id>/` or `<dir>/<id>/`.
std::vector<std::filesystem::path> PredictionPaths(const std::filesystem::path& dir,
                                                   const std::string& video_id);

void WriteJson(const std::filesystem::path& path, const nlohmann::json& j);

/// Foreign donors read lazily from dataset frame files.
class DiskDonors final : public DonorSource {
 public:
  explicit DiskDonors(std::vector<const VideoEntry*> videos) : videos_(std::move(videos)) {}
  std::size_t size() const override { return videos_.size(); }
  std::string id(std::size_t index) const override { return videos_.at(index)->id; }
  int length(std::size_t index) const override {
    return static_cast<int>(videos_.at(index)->frame_paths.size());
  }
  std::vector<Frame> Fetch(std::size_t index, int start, int count) const override;

 private:
  std::vector<const VideoEntry*> videos_;
};

}  // namespace cutvos::cli

#endif  // CUTVOS_CLI_RUN_HPP_
