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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "cutvos/dataset.hpp"
#include "cutvos/error.hpp"
#include "cutvos/image_io.hpp"
#include "support/fixtures.hpp"

namespace cutvos {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no cutvos::Error thrown";
  return ErrorCode::kInvalidArgument;
}

FrameSequenceSample EightFrames() {
  testing::MovingObjectSpec spec;
  spec.video_id = "eight";
  return testing::MovingObjectSample(spec);
}

TEST(LoadSampleTest, EightFramesLoad) {
  const fs::path root = testing::TempDir("load_eight");
  const auto sample = EightFrames();
  testing::WriteSampleToDataset(root, sample, /*jpeg=*/true);
  const auto loaded =
      LoadSample(root / "JPEGImages" / "eight", root / "Annotations" / "eight", 1);
  EXPECT_EQ(loaded.length(), 8);
  EXPECT_EQ(loaded.height(), 32);
  EXPECT_EQ(loaded.width(), 32);
  for (int t = 0; t < 8; ++t) EXPECT_EQ(loaded.masks[t], sample.masks[t]);
}

TEST(LoadSampleTest, MaskRoundTripIsPixelIdentical) {
  const fs::path root = testing::TempDir("load_roundtrip");
  const auto sample = EightFrames();
  testing::WriteSampleToDataset(root, sample);
  const auto loaded =
      LoadSample(root / "JPEGImages" / "eight", root / "Annotations" / "eight", 1);
  EXPECT_EQ(testing::HashSample(loaded), testing::HashSample(sample));
}

TEST(LoadSampleTest, MissingMaskIsMissingFrame) {
  const fs::path root = testing::TempDir("load_missing");
  testing::WriteSampleToDataset(root, EightFrames(), true);
  fs::remove(root / "Annotations" / "eight" / io::FrameName(7, ".png"));
  EXPECT_EQ(CodeOf([&] {
              LoadSample(root / "JPEGImages" / "eight", root / "Annotations" / "eight", 1);
            }),
            ErrorCode::kMissingFrame);
}

TEST(LoadSampleTest, MismatchedMaskSize) {
  const fs::path root = testing::TempDir("load_dims");
  testing::WriteSampleToDataset(root, EightFrames());
  io::WriteLabelPng(root / "Annotations" / "eight" / io::FrameName(3, ".png"), Mask(16, 32));
  EXPECT_EQ(CodeOf([&] {
              LoadSample(root / "JPEGImages" / "eight", root / "Annotations" / "eight", 1);
            }),
            ErrorCode::kDimensionMismatch);
}

TEST(LoadSampleTest, FiltersToRequestedObject) {
  const fs::path root = testing::TempDir("load_filter");
  auto sample = EightFrames();
  for (auto& m : sample.masks) m.at(0, 0) = 2;
  testing::WriteSampleToDataset(root, sample);
  const auto two =
      LoadSample(root / "JPEGImages" / "eight", root / "Annotations" / "eight", 2);
  for (const auto& m : two.masks) {
    EXPECT_EQ(CountForeground(m), 1u);
    EXPECT_EQ(m.at(0, 0), 2);
  }
  EXPECT_EQ(CodeOf([&] {
              LoadSample(root / "JPEGImages" / "eight", root / "Annotations" / "eight", 3);
            }),
            ErrorCode::kEmptyTrack);
}

TEST(PaletteTest, LabelPngRoundTrip) {
  const fs::path dir = testing::TempDir("palette");
  Mask m(5, 7);
  for (int i = 0; i < 35; ++i) m.data()[i] = static_cast<std::uint8_t>(i * 7);
  io::WriteLabelPng(dir / "m.png", m);
  EXPECT_EQ(io::ReadLabelPng(dir / "m.png"), m);
  // Standard DAVIS colours for labels 1 and 2.
  const auto& pal = io::DavisPalette();
  EXPECT_EQ(pal[1], (std::array<std::uint8_t, 3>{128, 0, 0}));
  EXPECT_EQ(pal[2], (std::array<std::uint8_t, 3>{0, 128, 0}));
}

TEST(ShotAnnotationTest, ParsesTwoTypedSegments) {
  const auto shots = ShotAnnotation::FromJson(json::parse(R"([
    {"start": 0, "end": 4, "presence": null, "view": "SceneChange"},
    {"start": 4, "end": 8, "presence": "CutIn", "view": null}])"));
  ASSERT_EQ(shots.shot_count(), 2);
  EXPECT_EQ(shots.length(), 8);
  EXPECT_EQ(shots.segments[0].view, TransitionType::kSceneChange);
  EXPECT_EQ(shots.segments[1].presence, TransitionType::kCutIn);
  EXPECT_EQ(shots.SegmentOf(3), 0);
  EXPECT_EQ(shots.SegmentOf(4), 1);
  EXPECT_EQ(ShotAnnotation::FromJson(shots.ToJson()), shots);
}

TEST(ShotAnnotationTest, Errors) {
  auto parse = [](const char* text) { ShotAnnotation::FromJson(json::parse(text)); };
  EXPECT_EQ(CodeOf([&] { parse(R"([{"start":0,"end":4},{"start":5,"end":8}])"); }),
            ErrorCode::kGapOrOverlap);
  EXPECT_EQ(CodeOf([&] { parse(R"([{"start":0,"end":5},{"start":4,"end":8}])"); }),
            ErrorCode::kGapOrOverlap);
  EXPECT_EQ(CodeOf([&] { parse(R"([{"start":0,"end":8,"view":"ZoomBlast"}])"); }),
            ErrorCode::kUnknownTransitionType);
  EXPECT_EQ(CodeOf([&] { parse(R"([{"start":0,"end":8,"view":"CutIn"}])"); }),
            ErrorCode::kUnknownTransitionType);
  EXPECT_EQ(CodeOf([&] { parse(R"([])"); }), ErrorCode::kEmptyShotList);
  EXPECT_EQ(CodeOf([&] { parse(R"([{"start":-1,"end":8}])"); }), ErrorCode::kOutOfRangeIndex);
  EXPECT_EQ(CodeOf([&] {
              ShotAnnotation::FromJson(json::parse(R"([{"start":0,"end":8}])"), 7);
            }),
            ErrorCode::kOutOfRangeIndex);
  // Trailing frames left uncovered.
  EXPECT_EQ(CodeOf([&] {
              ShotAnnotation::FromJson(json::parse(R"([{"start":0,"end":8}])"), 9);
            }),
            ErrorCode::kGapOrOverlap);
}

TEST(ShotAnnotationTest, TaxonomyNamesRoundTrip) {
  int presence = 0;
  for (auto t : kAllTransitionTypes) {
    EXPECT_EQ(ParseTransitionType(TransitionTypeName(t)), t);
    presence += IsPresenceType(t);
  }
  EXPECT_EQ(presence, 3);
}

// Validation accepts exactly the contiguous partitions of [0, T): enumerate
// every list of up to 3 segments with endpoints in [0, 5] and compare with a
// direct definition.
TEST(ShotAnnotationTest, ValidationMatchesPartitionDefinition) {
  const int T = 4;
  int accepted = 0;
  std::vector<std::pair<int, int>> ranges;
  for (int a = 0; a <= T + 1; ++a) {
    for (int b = 0; b <= T + 1; ++b) ranges.emplace_back(a, b);
  }
  auto check = [&](const std::vector<std::pair<int, int>>& segs) {
    bool partition = !segs.empty() && segs.front().first == 0 && segs.back().second == T;
    for (std::size_t i = 0; partition && i < segs.size(); ++i) {
      partition = segs[i].first < segs[i].second &&
                  (i == 0 || segs[i].first == segs[i - 1].second);
    }
    ShotAnnotation ann;
    for (auto [s, e] : segs) ann.segments.push_back({s, e, std::nullopt, std::nullopt});
    bool ok = true;
    try {
      ann.Validate(T);
    } catch (const Error&) {
      ok = false;
    }
    EXPECT_EQ(ok, partition);
    accepted += ok;
  };
  for (const auto& r1 : ranges) {
    check({r1});
    for (const auto& r2 : ranges) {
      check({r1, r2});
      for (const auto& r3 : ranges) check({r1, r2, r3});
    }
  }
  // Compositions of 4 into at most 3 parts: 1 + 3 + 3.
  EXPECT_EQ(accepted, 7);
}

VideoRecord Video(const std::string& id, int frames, double fps, int shots) {
  VideoRecord v;
  v.id = id;
  v.n_frames = frames;
  v.fps = fps;
  const int step = frames / shots;
  for (int s = 0; s < shots; ++s) {
    v.shots.segments.push_back({s * step, s == shots - 1 ? frames : (s + 1) * step,
                                std::nullopt, std::nullopt});
  }
  v.objects.push_back({1, "person", frames, shots});
  return v;
}

TEST(StatsTest, SingleShotHasZeroFrequency) {
  for (int frames : {1, 10, 1000}) {
    const std::vector<VideoRecord> v = {Video("a", frames, 24, 1)};
    EXPECT_EQ(ComputeStats(v).transition_frequency, 0.0);
  }
}

TEST(StatsTest, ThreeTenSecondVideos) {
  const std::vector<VideoRecord> v = {Video("a", 240, 24, 3), Video("b", 240, 24, 3),
                                      Video("c", 240, 24, 3)};
  const auto s = ComputeStats(v);
  EXPECT_DOUBLE_EQ(s.transition_frequency, 0.2);
  EXPECT_EQ(s.n_videos, 3);
  EXPECT_EQ(s.n_shots, 9);
  EXPECT_EQ(s.n_objects, 3);
  EXPECT_EQ(s.n_masks, 720);
  EXPECT_EQ(s.category_histogram.at("person"), 3);
  EXPECT_DOUBLE_EQ(s.mean_duration_s, 10.0);
}

TEST(StatsTest, SixAndAHalfShotsOverFifteenNineSeconds) {
  const std::vector<VideoRecord> v = {Video("a", 159, 10, 6), Video("b", 159, 10, 7)};
  const auto s = ComputeStats(v);
  EXPECT_DOUBLE_EQ(s.mean_shots_per_video, 6.5);
  EXPECT_DOUBLE_EQ(s.mean_duration_s, 15.9);
  EXPECT_NEAR(s.transition_frequency, 0.346, 0.001);
}

TEST(StatsTest, PermutationInvariant) {
  std::vector<VideoRecord> v;
  std::mt19937 gen(11);
  for (int i = 0; i < 9; ++i) {
    v.push_back(Video("v" + std::to_string(i), 30 + 17 * i, 10 + i, 1 + i % 4));
  }
  const json reference = ToJson(ComputeStats(v));
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(v.begin(), v.end(), gen);
    EXPECT_EQ(ToJson(ComputeStats(v)), reference);
  }
}

TEST(StatsTest, ZeroDuration) {
  const std::vector<VideoRecord> v = {Video("a", 0, 24, 1)};
  EXPECT_EQ(CodeOf([&] { ComputeStats(v); }), ErrorCode::kZeroDuration);
}

TEST(ScanDatasetTest, ReadsLayoutAndMeta) {
  const fs::path root = testing::TempDir("scan");
  testing::MovingObjectSpec spec;
  spec.video_id = "b_clip";
  auto b = testing::MovingObjectSample(spec);
  for (auto& m : b.masks) m.at(0, 0) = 2;
  spec.video_id = "a_clip";
  testing::WriteSampleToDataset(root, testing::MovingObjectSample(spec));
  testing::WriteSampleToDataset(root, b);
  SaveShotAnnotation(root / "shots" / "b_clip.json",
                     ShotAnnotation{{{0, 3, std::nullopt, std::nullopt},
                                     {3, 8, TransitionType::kCutAway, std::nullopt}}});
  std::ofstream(root / "meta.json")
      << R"({"b_clip": {"fps": 8, "categories": {"1": "dog", "2": "ball"}}})";

  const auto entries = ScanDataset(root);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].id, "a_clip");
  EXPECT_EQ(entries[0].fps, kDefaultFps);
  EXPECT_FALSE(entries[0].shots_path.has_value());
  EXPECT_EQ(entries[1].fps, 8.0);

  const VideoRecord rec = BuildVideoRecord(entries[1]);
  EXPECT_EQ(rec.shots.shot_count(), 2);
  ASSERT_EQ(rec.objects.size(), 2u);
  EXPECT_EQ(rec.objects[0].category, "dog");
  EXPECT_EQ(rec.objects[1].n_masks, 8);
  EXPECT_EQ(rec.objects[1].n_shots_present, 2);

  std::vector<VideoRecord> recs = {BuildVideoRecord(entries[0]), rec};
  const auto stats = ComputeStats(recs);
  EXPECT_EQ(stats.n_objects, 3);
  EXPECT_EQ(stats.n_shots, 3);
  EXPECT_EQ(stats.n_shots_per_target, 1 + 2 + 2);
  // Only b_clip has a transition: (2 - 1) / (8 / 8) averaged with 0.
  EXPECT_DOUBLE_EQ(stats.transition_frequency, 0.5);
}

}  // namespace
}  // namespace cutvos
