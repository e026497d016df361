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

#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "cutvos/dataset.hpp"
#include "cutvos/error.hpp"
#include "cutvos/harness.hpp"
#include "cutvos/image_io.hpp"
#include "cutvos/localcues.hpp"
#include "cutvos/metrics.hpp"
#include "cutvos/rng.hpp"
#include "cutvos/shotdetect.hpp"
#include "cutvos/tma.hpp"
#include "cutvos_cli/overlay.hpp"

namespace cutvos::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void Command::Configure(const json& file_section, Context& ctx) {
  ctx.manifest.config = params_.Resolve(file_section);
  ctx.manifest.layers = {{"default", params_.defaults()},
                         {"file", params_.file_layer()},
                         {"flag", params_.flag_layer()}};
  ctx.manifest.sources = params_.sources();
}

namespace {

std::vector<Frame> LoadFrames(const VideoEntry& entry) {
  std::vector<Frame> frames;
  frames.reserve(entry.frame_paths.size());
  for (const auto& p : entry.frame_paths) frames.push_back(io::ReadFrame(p));
  return frames;
}

std::vector<Mask> LoadAnnotations(const VideoEntry& entry) {
  if (entry.mask_paths.size() != entry.frame_paths.size()) {
    throw Error(ErrorCode::kMissingFrame,
                entry.id + ": " + std::to_string(entry.mask_paths.size()) + " masks for " +
                    std::to_string(entry.frame_paths.size()) + " frames");
  }
  return LoadLabelMasks(entry.mask_paths);
}

// Per-video scores: `path` names a file (single video) or a directory of
// `<video>.csv` files.
fs::path ScoresPath(const std::string& path, const std::string& video_id) {
  const fs::path p(path);
  return fs::is_directory(p) ? p / (video_id + ".csv") : p;
}

void RequireSingleVideoForFile(const std::string& path, std::size_t n_videos, const char* flag) {
  if (!path.empty() && !fs::is_directory(path) && n_videos != 1) {
    throw UsageError(std::string(flag) + " names a file; select exactly one video with --video "
                                         "or pass a directory");
  }
}

void WriteLabelSequence(const fs::path& dir, std::span<const Mask> labels) {
  for (std::size_t t = 0; t < labels.size(); ++t) {
    io::WriteLabelPng(dir / io::FrameName(static_cast<int>(t), ".png"), labels[t]);
  }
}

// ---- stats ------------------------------------------------------------------

class StatsCommand final : public Command {
 public:
  const char* name() const override { return "stats"; }
  const char* description() const override { return "Dataset statistics and transition frequency"; }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Dataset root")->required();
    params_.Add(app, "--fps", "fps", fps_, "Frame rate for videos missing from meta.json");
  }

  json Run(Context& ctx) override {
    const double fps = ctx.manifest.config.at("fps").get<double>();
    if (!(fps > 0)) throw Error(ErrorCode::kInvalidConfig, "fps must be > 0");
    const auto videos = SelectVideos(root, ctx.global.videos, fps);
    std::vector<VideoRecord> records(videos.size());
    ParallelFor(videos.size(), ctx.global.jobs,
                [&](std::size_t i) { records[i] = BuildVideoRecord(videos[i]); });
    json report = ToJson(ComputeStats(records));
    json per_video = json::array();
    for (const auto& r : records) {
      per_video.push_back({{"id", r.id},
                           {"n_frames", r.n_frames},
                           {"fps", r.fps},
                           {"duration_s", Round6(r.duration_s())},
                           {"n_shots", r.shots.shot_count()},
                           {"n_objects", r.objects.size()}});
    }
    report["videos"] = per_video;
    WriteJson(ctx.global.out / "stats.json", report);
    ctx.AddOutput("stats.json");
    return report;
  }

 private:
  double fps_ = kDefaultFps;
};

// ---- augment ----------------------------------------------------------------

class AugmentCommand final : public Command {
 public:
  const char* name() const override { return "augment"; }
  const char* description() const override {
    return "Synthesize multi-shot clips with transition-mimicking augmentation";
  }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Dataset root")->required();
    seed_opt_ = app->add_option("--seed", seed_, "Master seed (overrides config and CUTVOS_SEED)");
  }

  void Configure(const json& file, Context& ctx) override {
    TmaConfig cfg = file.is_null() ? TmaConfig{} : TmaConfig::FromJson(file);
    const json defaults = TmaConfig{}.ToJson();
    json sources = json::object();
    for (const auto& [key, value] : defaults.items()) {
      bool from_file = file.is_object() && file.contains(key);
      if (file.is_object()) {
        for (const auto& [fkey, fvalue] : file.items()) {
          from_file |= fkey.rfind(key + ".", 0) == 0;
        }
      }
      sources[key] = from_file ? "file" : "default";
    }
    json env_layer = json::object();
    std::uint64_t master = 0;
    if (seed_opt_->count() > 0) {
      master = seed_;
      sources["seed"] = "flag";
    } else if (cfg.seed) {
      master = *cfg.seed;
    } else if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      char* end = nullptr;
      master = std::strtoull(env, &end, 10);
      if (*end != '\0') throw Error(ErrorCode::kInvalidConfig, std::string(kSeedEnv) + " is not a u64");
      env_layer["seed"] = master;
      sources["seed"] = "env";
    }
    cfg.seed = master;
    cfg.Validate();
    ctx.manifest.seed = master;
    ctx.manifest.config = cfg.ToJson();
    ctx.manifest.layers = {{"default", defaults},
                           {"file", file.is_null() ? json::object() : file},
                           {"env", env_layer},
                           {"flag", seed_opt_->count() > 0 ? json{{"seed", seed_}} : json::object()}};
    ctx.manifest.sources = sources;
  }

  json Run(Context& ctx) override {
    const TmaConfig cfg = TmaConfig::FromJson(ctx.manifest.config);
    const std::uint64_t master = *cfg.seed;
    const int T = cfg.clip_length;
    const auto all = ScanDataset(root);
    const auto videos = SelectVideos(root, ctx.global.videos);

    std::vector<std::vector<int>> objects(videos.size());
    ParallelFor(videos.size(), ctx.global.jobs,
                [&](std::size_t i) { objects[i] = ObjectIds(LoadAnnotations(videos[i])); });

    // One job per (video, object); clips are consecutive non-overlapping
    // windows and sample indices follow that order.
    struct Job {
      std::size_t video;
      int object;
      int first_index;
      int n_clips;
    };
    std::vector<Job> jobs;
    int total = 0;
    for (std::size_t v = 0; v < videos.size(); ++v) {
      const int n_clips = static_cast<int>(videos[v].frame_paths.size()) / T;
      for (int obj : objects[v]) {
        if (n_clips == 0) continue;
        jobs.push_back({v, obj, total, n_clips});
        total += n_clips;
      }
    }
    if (total == 0) {
      throw Error(ErrorCode::kTimelineTooShort,
                  "no annotated video has " + std::to_string(T) + " frames");
    }

    struct ClipResult {
      std::string id;
      std::string video;
      int object = 0;
      int start = 0;
      std::vector<int> labels;
      json provenance;
    };
    std::vector<ClipResult> results(total);
    const fs::path out = ctx.global.out;
    ParallelFor(jobs.size(), ctx.global.jobs, [&](std::size_t j) {
      const Job& job = jobs[j];
      const VideoEntry& entry = videos[job.video];
      const FrameSequenceSample full = LoadVideoSample(entry, job.object);
      std::vector<const VideoEntry*> foreign;
      for (const auto& e : all) {
        if (e.id != entry.id) foreign.push_back(&e);
      }
      const DiskDonors donors(std::move(foreign));
      for (int k = 0; k < job.n_clips; ++k) {
        const int start = k * T;
        const int index = job.first_index + k;
        FrameSequenceSample clip;
        clip.video_id = entry.id + "_o" + std::to_string(job.object) + "_c" + std::to_string(k);
        clip.frames.assign(full.frames.begin() + start, full.frames.begin() + start + T);
        clip.masks.assign(full.masks.begin() + start, full.masks.begin() + start + T);
        clip.object_id = job.object;
        clip.fps = full.fps;
        Rng rng(Rng::Split(master, static_cast<std::uint64_t>(index)));
        const DonorPool pool{&donors, VideoTimeline{full.frames, full.masks, start}};
        const TmaOutcome outcome = ApplyTma(clip, pool, cfg, rng);

        for (int t = 0; t < T; ++t) {
          io::WriteFramePng(out / "JPEGImages" / clip.video_id / io::FrameName(t, ".png"),
                            outcome.sample.frames[t]);
          Mask labels = outcome.sample.masks[t];
          for (auto& v : labels.data()) v = v ? static_cast<std::uint8_t>(job.object) : 0;
          io::WriteLabelPng(out / "Annotations" / clip.video_id / io::FrameName(t, ".png"), labels);
        }
        const auto label_indices = outcome.LabelIndices();
        SaveShotAnnotation(out / "shots" / (clip.video_id + ".json"),
                           ScoresToShots(label_indices, T));
        results[index] = {clip.video_id, entry.id,     job.object,
                          start,         label_indices, outcome.ProvenanceJson()};
      }
    });

    json transitions = json::object();
    json provenance = json::object();
    json items = json::array();
    int transitioned = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      transitions[r.id] = r.labels;
      provenance[r.id] = {{"video", r.video},
                          {"object", r.object},
                          {"start", r.start},
                          {"sample_index", i},
                          {"sample_seed", Rng::Split(master, i)},
                          {"provenance", r.provenance}};
      items.push_back({{"id", r.id}, {"labels", r.labels}});
      transitioned += !r.labels.empty();
    }
    WriteJson(out / "transitions.json", transitions);
    WriteJson(out / "provenance.json", provenance);
    ctx.AddOutput("transitions.json");
    ctx.AddOutput("provenance.json");
    return {{"seed", master}, {"n_clips", total}, {"n_transitioned", transitioned}, {"clips", items}};
  }

 private:
  std::uint64_t seed_ = 0;
  CLI::Option* seed_opt_ = nullptr;
};

// ---- detect -----------------------------------------------------------------

class DetectCommand final : public Command {
 public:
  const char* name() const override { return "detect"; }
  const char* description() const override { return "Detect shot transitions"; }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Dataset root")->required();
    params_.Add(app, "--tau", "tau", tau_, "Transition score threshold");
    params_.Add(app, "--window", "window", window_, "Scorer window (frames incl. current)");
    params_.Add(app, "--min-shot-len", "min_shot_len", min_shot_len_, "Minimum shot length");
    params_.Add(app, "--scores-file", "scores_file", scores_file_,
                "Precomputed scores (csv file, or directory of <video>.csv)");
  }

  json Run(Context& ctx) override {
    const json& c = ctx.manifest.config;
    const DetectorConfig det{c.at("tau").get<double>(), c.at("min_shot_len").get<int>()};
    det.Validate();
    const HistogramScorer scorer(c.at("window").get<int>());
    const std::string scores_file = c.at("scores_file").get<std::string>();
    const auto videos = SelectVideos(root, ctx.global.videos);
    RequireSingleVideoForFile(scores_file, videos.size(), "--scores-file");

    std::vector<json> rows(videos.size());
    const fs::path out = ctx.global.out;
    ParallelFor(videos.size(), ctx.global.jobs, [&](std::size_t i) {
      const VideoEntry& entry = videos[i];
      const int n = static_cast<int>(entry.frame_paths.size());
      std::vector<double> scores;
      if (scores_file.empty()) {
        scores = ScoreFrames(LoadFrames(entry), scorer);
      } else {
        scores = ReadScoresFile(ScoresPath(scores_file, entry.id));
        if (static_cast<int>(scores.size()) != n) {
          throw Error(ErrorCode::kDimensionMismatch,
                      entry.id + ": " + std::to_string(scores.size()) + " scores for " +
                          std::to_string(n) + " frames");
        }
      }
      const auto transitions = DetectTransitions(scores, det);
      SaveShotAnnotation(out / "shots" / (entry.id + ".json"), ScoresToShots(transitions, n));
      std::string csv = "frame_index,score\n";
      for (int t = 0; t < n; ++t) {
        char line[64];
        std::snprintf(line, sizeof line, "%d,%.6f\n", t, scores[t]);
        csv += line;
      }
      io::WriteFileAtomic(out / "scores" / (entry.id + ".csv"), csv);
      json row = {{"id", entry.id}, {"n_frames", n}, {"transitions", transitions}};
      if (entry.shots_path) {
        const auto gt = LoadShotAnnotation(*entry.shots_path, n);
        std::vector<int> gt_transitions;
        for (int s = 1; s < gt.shot_count(); ++s) gt_transitions.push_back(gt.segments[s].start);
        row["pr"] = ToJson(ShotDetectionPr(transitions, gt_transitions, 1));
      }
      rows[i] = std::move(row);
    });
    json report = {{"videos", rows}};
    WriteJson(out / "detect.json", report);
    ctx.AddOutput("detect.json");
    return report;
  }

 private:
  double tau_ = DetectorConfig{}.tau_tr;
  int window_ = 2;
  int min_shot_len_ = DetectorConfig{}.min_shot_len;
  std::string scores_file_;
};

// ---- evaluate ---------------------------------------------------------------

class EvaluateCommand final : public Command {
 public:
  const char* name() const override { return "evaluate"; }
  const char* description() const override {
    return "Score predicted masks: J, F, J&F, J_t, transition accuracy";
  }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Ground-truth dataset root")->required();
    params_.Add(app, "--pred", "pred", pred_, "Prediction root (<dir>/Annotations/<video>/)");
    params_.Add(app, "--shots", "shots", shots_, "Shot annotation directory override");
    params_.Add(app, "--context", "context", context_, "Frames each side of a transition");
    params_.Add(app, "--tolerance", "tolerance", tolerance_,
                "Boundary tolerance in pixels (-1: from image size)");
  }

  json Run(Context& ctx) override {
    const json& c = ctx.manifest.config;
    const std::string pred = c.at("pred").get<std::string>();
    if (pred.empty()) throw UsageError("--pred is required");
    const std::string shots_dir = c.at("shots").get<std::string>();
    const int context = c.at("context").get<int>();
    const int tolerance = c.at("tolerance").get<int>();
    const auto videos = SelectVideos(root, ctx.global.videos);

    struct VideoResult {
      std::vector<std::pair<int, EvalReport>> objects;
      TransitionAccuracyReport accuracy;
      bool typed = true;
    };
    std::vector<VideoResult> results(videos.size());
    ParallelFor(videos.size(), ctx.global.jobs, [&](std::size_t i) {
      const VideoEntry& entry = videos[i];
      const auto gt = LoadAnnotations(entry);
      const auto pred_paths = PredictionPaths(pred, entry.id);
      if (pred_paths.size() != gt.size()) {
        throw Error(ErrorCode::kMissingFrame,
                    entry.id + ": " + std::to_string(pred_paths.size()) + " predictions for " +
                        std::to_string(gt.size()) + " frames");
      }
      const auto pm = LoadLabelMasks(pred_paths);
      const auto shots = ShotsFor(entry, static_cast<int>(gt.size()), shots_dir);
      VideoResult& r = results[i];
      for (int s = 1; s < shots.shot_count(); ++s) {
        r.typed &= shots.segments[s].presence.has_value() || shots.segments[s].view.has_value();
      }
      for (int obj : ObjectIds(gt)) {
        std::vector<Mask> g, p;
        for (std::size_t t = 0; t < gt.size(); ++t) {
          g.push_back(FilterObject(gt[t], obj));
          p.push_back(FilterObject(pm[t], obj));
        }
        r.objects.emplace_back(
            obj, EvaluateTrack(p, g, shots, tolerance < 0 ? std::nullopt : std::optional(tolerance)));
        if (r.typed) r.accuracy.Merge(TransitionAccuracy(p, g, shots, context));
      }
    });

    json objects = json::array();
    json untyped = json::array();
    std::vector<EvalReport> reports;
    TransitionAccuracyReport accuracy;
    for (std::size_t i = 0; i < videos.size(); ++i) {
      for (const auto& [obj, rep] : results[i].objects) {
        objects.push_back({{"video", videos[i].id}, {"object", obj}, {"report", ToJson(rep)}});
        reports.push_back(rep);
      }
      if (results[i].typed) accuracy.Merge(results[i].accuracy);
      else untyped.push_back(videos[i].id);
    }
    accuracy.UpdateExpected();
    json report = {{"objects", objects},
                   {"aggregate", ToJson(Aggregate(reports))},
                   {"transition_accuracy", ToJson(accuracy)},
                   {"untyped_videos", untyped}};
    WriteJson(ctx.global.out / "eval_report.json", report);
    ctx.AddOutput("eval_report.json");
    return report;
  }

 private:
  std::string pred_;
  std::string shots_;
  int context_ = 2;
  int tolerance_ = -1;
};

// ---- partition --------------------------------------------------------------

class PartitionCommand final : public Command {
 public:
  const char* name() const override { return "partition"; }
  const char* description() const override {
    return "Split object masks into local regions and extract cues";
  }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Dataset root")->required();
    params_.Add(app, "--groups", "groups", groups_, "Regions per object (k)");
    params_.Add(app, "--tau-p", "tau_p", tau_p_, "Minimum mask area fraction");
    params_.Add(app, "--feature-file", "feature_file", feature_file_,
                "Feature grid file, directory of <video>.fgrd, or auto (colour features)");
    params_.Add(app, "--cell-size", "cell_size", cell_size_, "Pixels per grid cell");
    params_.Add(app, "--frame", "frame", frame_, "Frame index to partition");
  }

  json Run(Context& ctx) override {
    const json& c = ctx.manifest.config;
    const LocalCueOptions options{c.at("groups").get<int>(), c.at("tau_p").get<double>(),
                                  c.at("cell_size").get<int>()};
    const std::string feature_file = c.at("feature_file").get<std::string>();
    const int frame_index = c.at("frame").get<int>();
    const auto videos = SelectVideos(root, ctx.global.videos);
    if (feature_file != "auto") RequireSingleVideoForFile(feature_file, videos.size(), "--feature-file");

    std::vector<json> rows(videos.size());
    const fs::path out = ctx.global.out;
    ParallelFor(videos.size(), ctx.global.jobs, [&](std::size_t i) {
      const VideoEntry& entry = videos[i];
      if (frame_index < 0 || frame_index >= static_cast<int>(entry.frame_paths.size()) ||
          frame_index >= static_cast<int>(entry.mask_paths.size())) {
        throw Error(ErrorCode::kOutOfRangeIndex,
                    entry.id + ": frame " + std::to_string(frame_index) + " not annotated");
      }
      const Frame frame = io::ReadFrame(entry.frame_paths[frame_index]);
      const Mask labels = io::ReadLabelPng(entry.mask_paths[frame_index]);
      if (!labels.same_shape(frame)) {
        throw Error(ErrorCode::kDimensionMismatch, entry.id + ": mask and frame sizes differ");
      }
      const FeatureGrid features =
          feature_file == "auto"
              ? ComputeColorFeatures(frame, options.cell_size)
              : ReadFeatureGrid(fs::is_directory(feature_file)
                                    ? fs::path(feature_file) / (entry.id + ".fgrd")
                                    : fs::path(feature_file));
      json entries = json::array();
      for (int obj : ObjectIds(std::span(&labels, 1))) {
        RegionPartition partition;
        const LocalCueSet cues = BuildLocalCues(features, FilterObject(labels, obj), options, &partition);
        json row = {{"video", entry.id}, {"object", obj}, {"frame", frame_index}, {"label_map", nullptr}};
        if (!cues.skipped) {
          Mask map(partition.h, partition.w);
          for (std::size_t k = 0; k < partition.labels.size(); ++k) {
            map.data()[k] = static_cast<std::uint8_t>(partition.labels[k]);
          }
          const std::string rel = "partitions/" + entry.id + "/o" + std::to_string(obj) + ".png";
          io::WriteLabelPng(out / rel, map);
          row["label_map"] = rel;
        }
        row["cues"] = ToJson(cues);
        entries.push_back(std::move(row));
      }
      rows[i] = std::move(entries);
    });
    json flat = json::array();
    for (auto& r : rows) {
      for (auto& e : r) flat.push_back(std::move(e));
    }
    json report = {{"entries", flat}};
    WriteJson(out / "cues.json", report);
    ctx.AddOutput("cues.json");
    return report;
  }

 private:
  int groups_ = LocalCueOptions{}.groups;
  double tau_p_ = LocalCueOptions{}.tau_p;
  std::string feature_file_ = "auto";
  int cell_size_ = LocalCueOptions{}.cell_size;
  int frame_ = 0;
};

// ---- track ------------------------------------------------------------------

class TrackCommand final : public Command {
 public:
  const char* name() const override { return "track"; }
  const char* description() const override {
    return "Run the memory-routing tracker with a reference segmenter";
  }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Dataset root")->required();
    params_.Add(app, "--tau", "tau", tau_, "Transition score threshold");
    params_.Add(app, "--na", "na", na_, "Adjacent bank capacity");
    params_.Add(app, "--ns", "ns", ns_, "Scene bank capacity");
    params_.Add(app, "--segmenter", "segmenter", segmenter_, "oracle or last");
    params_.Add(app, "--oracle-masks", "oracle_masks", oracle_masks_,
                "Masks the oracle reveals at shot starts (default: dataset annotations)");
    params_.Add(app, "--shots", "shots", shots_, "Shot annotation directory override");
    params_.Add(app, "--scores-file", "scores_file", scores_file_,
                "Precomputed scores (csv file, or directory of <video>.csv)");
    params_.Add(app, "--window", "window", window_, "Scorer window (frames incl. current)");
    params_.Add(app, "--groups", "groups", groups_, "Local-cue regions");
    params_.Add(app, "--tau-p", "tau_p", tau_p_, "Local-cue minimum area fraction");
  }

  json Run(Context& ctx) override {
    const json& c = ctx.manifest.config;
    TrackerConfig tc;
    tc.tau_tr = c.at("tau").get<double>();
    tc.adjacent_capacity = c.at("na").get<int>();
    tc.scene_capacity = c.at("ns").get<int>();
    tc.local.groups = c.at("groups").get<int>();
    tc.local.tau_p = c.at("tau_p").get<double>();
    tc.Validate();
    const std::string segmenter = c.at("segmenter").get<std::string>();
    if (segmenter != "oracle" && segmenter != "last") {
      throw UsageError("--segmenter must be oracle or last, got " + segmenter);
    }
    const std::string oracle_masks = c.at("oracle_masks").get<std::string>();
    const std::string shots_dir = c.at("shots").get<std::string>();
    const std::string scores_file = c.at("scores_file").get<std::string>();
    const HistogramScorer scorer(c.at("window").get<int>());
    const auto videos = SelectVideos(root, ctx.global.videos);
    RequireSingleVideoForFile(scores_file, videos.size(), "--scores-file");

    std::vector<json> rows(videos.size());
    const fs::path out = ctx.global.out;
    ParallelFor(videos.size(), ctx.global.jobs, [&](std::size_t i) {
      const VideoEntry& entry = videos[i];
      const auto frames = LoadFrames(entry);
      const auto gt = LoadAnnotations(entry);
      const int n = static_cast<int>(frames.size());
      if (n == 0) throw Error(ErrorCode::kEmptyTrack, entry.id + " has no frames");
      std::vector<double> scores;
      if (scores_file.empty()) {
        scores = ScoreFrames(frames, scorer);
      } else {
        scores = ReadScoresFile(ScoresPath(scores_file, entry.id));
      }
      std::vector<fs::path> oracle_paths;
      if (!oracle_masks.empty()) {
        oracle_paths = PredictionPaths(oracle_masks, entry.id);
        if (static_cast<int>(oracle_paths.size()) != n) {
          throw Error(ErrorCode::kMissingOracleMask, entry.id + ": oracle mask count differs");
        }
      }
      const ShotAnnotation shots =
          segmenter == "oracle" ? ShotsFor(entry, n, shots_dir) : ShotAnnotation::Single(n);

      std::vector<Mask> combined(n, Mask(gt[0].height(), gt[0].width()));
      json tracks = json::array();
      for (int obj : ObjectIds(std::span(&gt[0], 1))) {
        std::unique_ptr<Segmenter> seg;
        if (segmenter == "oracle") {
          seg = std::make_unique<OracleSegmenter>(shots, [&, obj](int t) -> std::optional<Mask> {
            if (oracle_paths.empty()) return FilterObject(gt[t], obj);
            return FilterObject(io::ReadLabelPng(oracle_paths[t]), obj);
          });
        } else {
          seg = std::make_unique<PropagateLastSegmenter>();
        }
        const TrackerTrace trace = RunTracker(frames, FilterObject(gt[0], obj), scores, *seg, tc);
        for (int t = 0; t < n; ++t) {
          const auto src = trace.masks[t].data();
          auto dst = combined[t].data();
          for (std::size_t k = 0; k < src.size(); ++k) {
            if (src[k]) dst[k] = static_cast<std::uint8_t>(obj);
          }
        }
        tracks.push_back({{"video", entry.id}, {"object", obj}, {"trace", trace.ToJson()}});
      }
      WriteLabelSequence(out / "Annotations" / entry.id, combined);
      rows[i] = std::move(tracks);
    });
    json flat = json::array();
    for (auto& r : rows) {
      for (auto& t : r) flat.push_back(std::move(t));
    }
    json report = {{"tracks", flat}};
    WriteJson(out / "trace.json", report);
    ctx.AddOutput("trace.json");
    return report;
  }

 private:
  double tau_ = TrackerConfig{}.tau_tr;
  int na_ = TrackerConfig{}.adjacent_capacity;
  int ns_ = TrackerConfig{}.scene_capacity;
  std::string segmenter_ = "oracle";
  std::string oracle_masks_;
  std::string shots_;
  std::string scores_file_;
  int window_ = 2;
  int groups_ = LocalCueOptions{}.groups;
  double tau_p_ = LocalCueOptions{}.tau_p;
};

// ---- overlay ----------------------------------------------------------------

class OverlayCommand final : public Command {
 public:
  const char* name() const override { return "overlay"; }
  const char* description() const override { return "Render masks over frames as PNGs"; }

  void Register(CLI::App* app) override {
    app->add_option("root", root, "Dataset root")->required();
    params_.Add(app, "--pred", "pred", pred_, "Prediction root (default: dataset annotations)");
    params_.Add(app, "--alpha", "alpha", alpha_, "Mask opacity in [0, 1]");
  }

  json Run(Context& ctx) override {
    const json& c = ctx.manifest.config;
    const std::string pred = c.at("pred").get<std::string>();
    const double alpha = c.at("alpha").get<double>();
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "alpha must be in [0, 1]");
    const auto videos = SelectVideos(root, ctx.global.videos);
    std::vector<json> rows(videos.size());
    const fs::path out = ctx.global.out;
    ParallelFor(videos.size(), ctx.global.jobs, [&](std::size_t i) {
      const VideoEntry& entry = videos[i];
      const auto paths = pred.empty() ? entry.mask_paths : PredictionPaths(pred, entry.id);
      if (paths.size() != entry.frame_paths.size()) {
        throw Error(ErrorCode::kMissingFrame, entry.id + ": mask count differs from frame count");
      }
      for (std::size_t t = 0; t < paths.size(); ++t) {
        const Frame rendered =
            RenderOverlay(io::ReadFrame(entry.frame_paths[t]), io::ReadLabelPng(paths[t]), alpha);
        io::WriteFramePng(out / "overlay" / entry.id / io::FrameName(static_cast<int>(t), ".png"),
                          rendered);
      }
      rows[i] = {{"id", entry.id}, {"n_frames", paths.size()}};
    });
    return {{"alpha", alpha}, {"videos", rows}};
  }

 private:
  std::string pred_;
  double alpha_ = 0.5;
};

}  // namespace

std::vector<std::unique_ptr<Command>> MakeCommands() {
  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<StatsCommand>());
  commands.push_back(std::make_unique<AugmentCommand>());
  commands.push_back(std::make_unique<DetectCommand>());
  commands.push_back(std::make_unique<EvaluateCommand>());
  commands.push_back(std::make_unique<PartitionCommand>());
  commands.push_back(std::make_unique<TrackCommand>());
  commands.push_back(std::make_unique<OverlayCommand>());
  return commands;
}

}  // namespace cutvos::cli
