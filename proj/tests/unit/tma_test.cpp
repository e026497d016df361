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

#include <cmath>
#include <optional>

#include "cutvos/error.hpp"
#include "cutvos/imgops.hpp"
#include "cutvos/tma.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace cutvos {
namespace {

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

using Trace = testing::TmaTrace;

struct World {
  FrameSequenceSample timeline_sample;
  FrameSequenceSample sample;
  InMemoryDonors donors;
  DonorPool pool;

  World()
      : timeline_sample(MakeTimeline()),
        sample(Slice(timeline_sample, 10, 8)),
        donors(MakeDonors()) {
    pool.foreign = &donors;
    pool.timeline = VideoTimeline{timeline_sample.frames, timeline_sample.masks, 10};
  }

  static FrameSequenceSample MakeTimeline() {
    testing::MovingObjectSpec spec;
    spec.video_id = "main";
    spec.length = 30;
    spec.width = 48;
    spec.left = 2;
    return testing::MovingObjectSample(spec);
  }
  static FrameSequenceSample Slice(const FrameSequenceSample& s, int start, int n) {
    FrameSequenceSample out = s;
    out.frames.assign(s.frames.begin() + start, s.frames.begin() + start + n);
    out.masks.assign(s.masks.begin() + start, s.masks.begin() + start + n);
    return out;
  }
  static std::vector<FrameSequenceSample> MakeDonors() {
    std::vector<FrameSequenceSample> out;
    for (int d = 0; d < 3; ++d) {
      FrameSequenceSample s;
      s.video_id = "donor" + std::to_string(d);
      for (int t = 0; t < 12; ++t) {
        s.frames.push_back(testing::TexturedFrame(32, 48, {20, 40, static_cast<std::uint8_t>(90 + 50 * d)},
                                                  7 * t + d, 60));
        s.masks.push_back(Mask(32, 48));
      }
      out.push_back(std::move(s));
    }
    return out;
  }
};

std::optional<std::uint64_t> FindSeed(const TmaConfig& cfg, auto&& want) {
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    if (want(testing::InterpretTma(seed, cfg, 3, 12))) return seed;
  }
  return std::nullopt;
}

TEST(TmaTest, ZeroTransitionProbabilityIsIdentity) {
  World w;
  TmaConfig cfg;
  cfg.p_trans = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto out = ApplyTma(w.sample, w.pool, cfg, rng);
    EXPECT_EQ(testing::HashSample(out.sample), testing::HashSample(w.sample));
    EXPECT_TRUE(out.LabelIndices().empty());
    EXPECT_FALSE(out.decisions.transitioned);
  }
}

TEST(TmaTest, MatchesDrawOrderInterpreter) {
  World w;
  for (const TmaConfig& cfg : {TmaConfig{}, [] {
                                 TmaConfig c;
                                 c.p_trans = c.p_cut = 0.9;
                                 c.p_same = c.p_copy = 0.5;
                                 return c;
                               }()}) {
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      Rng rng(seed);
      const auto out = ApplyTma(w.sample, w.pool, cfg, rng);
      const Trace t = testing::InterpretTma(seed, cfg, 3, 12);
      ASSERT_EQ(out.decisions, t.d) << seed;
      ASSERT_EQ(out.LabelIndices(), t.labels) << seed;
      if (t.d.transitioned) {
        ASSERT_EQ(out.window_begin, t.s);
        ASSERT_EQ(out.window_end, t.e);
      }
      ASSERT_EQ(rng.NextU64(), t.next) << "draw count differs for seed " << seed;
    }
  }
}

TEST(TmaTest, TraceMultiCutForeignNoCopy) {
  World w;
  const TmaConfig cfg;
  const auto seed = FindSeed(cfg, [](const Trace& t) {
    return t.d.transitioned && !t.d.once && t.d.cut && !t.d.same_video && !t.d.copy &&
           !t.d.hflip;
  });
  ASSERT_TRUE(seed.has_value());
  Rng rng(*seed);
  const auto out = ApplyTma(w.sample, w.pool, cfg, rng);
  EXPECT_EQ(out.window_begin, 2);
  EXPECT_EQ(out.window_end, 5);
  EXPECT_EQ(out.LabelIndices(), (std::vector<int>{2, 5}));

  const ProvenanceEntry* donor = nullptr;
  const ProvenanceEntry* moderate = nullptr;
  for (const auto& p : out.provenance) {
    if (p.op == "donor_foreign") donor = &p;
    if (p.op == "affine_moderate") moderate = &p;
  }
  ASSERT_NE(donor, nullptr);
  ASSERT_NE(moderate, nullptr);
  const int d = donor->donor.back() - '0';
  const int start = donor->params["start"].get<int>();
  const auto params = moderate->params.get<AffineParams>();
  const auto donor_clip = World::MakeDonors()[d];
  for (int i = 0; i < 8; ++i) {
    if (i >= 2 && i < 5) {
      const auto expected = AffineTransform(donor_clip.frames[start + i], Mask(32, 48), params);
      EXPECT_EQ(out.sample.frames[i], expected.frame) << i;
      EXPECT_TRUE(IsEmpty(out.sample.masks[i]));
      EXPECT_EQ(out.origins[i].source, donor->donor);
      EXPECT_EQ(out.origins[i].frame, start + i);
    } else {
      EXPECT_EQ(out.sample.frames[i], w.sample.frames[i]) << i;
      EXPECT_EQ(out.sample.masks[i], w.sample.masks[i]) << i;
    }
  }
}

TEST(TmaTest, TraceOnceCutForeignCopyShrinksDisplacement) {
  // A static single-pixel marker makes the per-frame translation readable.
  FrameSequenceSample sample;
  sample.video_id = "marker";
  for (int t = 0; t < 8; ++t) {
    Frame f = testing::SolidFrame(40, 80, {10, 10, 10});
    Mask m(40, 80);
    m.at(20, 40) = 1;
    f.at(20, 40, 0) = 250;
    sample.frames.push_back(f);
    sample.masks.push_back(m);
  }
  std::vector<FrameSequenceSample> donor_list = {World::MakeDonors()[0]};
  InMemoryDonors donors(donor_list);
  const TmaConfig cfg;
  const auto seed = FindSeed(cfg, [](const Trace& t) {
    return t.d.transitioned && t.d.once && t.d.cut && !t.d.same_video && t.d.copy &&
           !t.d.hflip && std::abs(t.base_x) > 0.1 && std::abs(t.base_x) < 0.45 &&
           std::abs(t.base_y) < 0.45;
  });
  ASSERT_TRUE(seed.has_value());
  Rng rng(*seed);
  const auto out = ApplyTma(sample, DonorPool{&donors, std::nullopt}, cfg, rng);
  const Trace trace = testing::InterpretTma(*seed, cfg, 1, 12);
  EXPECT_EQ(out.LabelIndices(), std::vector<int>{4});

  double previous = 1e9;
  for (int i = 4; i < 8; ++i) {
    const Mask& m = out.sample.masks[i];
    ASSERT_EQ(CountForeground(m), 1u) << i;
    int row = -1, col = -1;
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 80; ++x) {
        if (m.at(y, x)) row = y, col = x;
      }
    }
    const double factor = (4.0 - (i - 4)) / 4.0;
    EXPECT_LE(std::abs(col - (40 + trace.base_x * factor * 80)), 0.5) << i;
    EXPECT_LE(std::abs(row - (20 + trace.base_y * factor * 40)), 0.5) << i;
    const auto moved = GradualTranslation(sample.frames[i], sample.masks[i], i - 4, 4,
                                          trace.base_x, trace.base_y);
    EXPECT_EQ(out.sample.frames[i].at(row, col, 0), moved.frame.at(row, col, 0));
    EXPECT_GT(out.sample.frames[i].at(row, col, 0), 10);
    const double disp = std::abs(col - 40);
    EXPECT_LE(disp, previous);
    previous = disp;
  }
  for (int i = 0; i < 4; ++i) EXPECT_EQ(out.sample.frames[i], sample.frames[i]);
}

TEST(TmaTest, LabelProbabilityAtDefaults) {
  FrameSequenceSample tiny;
  tiny.video_id = "tiny";
  for (int t = 0; t < 8; ++t) {
    tiny.frames.push_back(testing::SolidFrame(2, 2, {9, 9, 9}));
    tiny.masks.push_back(Mask(2, 2, 1));
  }
  std::vector<FrameSequenceSample> donor_list = {tiny};
  donor_list[0].video_id = "d";
  InMemoryDonors donors(donor_list);
  FrameSequenceSample timeline = tiny;
  for (int t = 0; t < 8; ++t) {
    timeline.frames.push_back(tiny.frames[0]);
    timeline.masks.push_back(tiny.masks[0]);
  }
  const DonorPool pool{&donors, VideoTimeline{timeline.frames, timeline.masks, 0}};
  const TmaConfig cfg;
  const int n = 1000000;
  int with_label = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::Split(2024, i));
    with_label += !ApplyTma(tiny, pool, cfg, rng).LabelIndices().empty();
  }
  EXPECT_NEAR(static_cast<double>(with_label) / n, 0.60, 0.002);
}

TEST(SameVideoTest, LinearDistanceWeighting) {
  // Offsets 0..3 with the current window at 0: weights 0, 1, 2, 3.
  testing::MovingObjectSpec spec;
  spec.length = 11;
  spec.height = spec.width = 8;
  spec.size = 2;
  spec.left = 0;
  const auto s = testing::MovingObjectSample(spec);
  const VideoTimeline tl{s.frames, s.masks, 0};
  std::array<int, 4> counts{};
  Rng rng(77);
  for (int i = 0; i < 100000; ++i) counts[SampleSameVideoSegment(tl, 8, rng).offset]++;
  EXPECT_EQ(counts[0], 0);
  const double ratio = static_cast<double>(counts[3]) / counts[1];
  EXPECT_NEAR(ratio, 3.0, 3.0 * 0.02);
  const auto seg = SampleSameVideoSegment(tl, 8, rng);
  ASSERT_EQ(seg.frames.size(), 8u);
  EXPECT_EQ(seg.frames[0], s.frames[seg.offset]);
}

TEST(SameVideoTest, TooShortTimeline) {
  const auto s = World::MakeTimeline();
  const VideoTimeline tl{std::span(s.frames).first(8), std::span(s.masks).first(8), 0};
  Rng rng(1);
  EXPECT_EQ(CodeOf([&] { SampleSameVideoSegment(tl, 8, rng); }), ErrorCode::kTimelineTooShort);
}

TEST(TmaTest, DeterministicForSeed) {
  World w;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng a(seed), b(seed);
    const auto x = ApplyTma(w.sample, w.pool, TmaConfig{}, a);
    const auto y = ApplyTma(w.sample, w.pool, TmaConfig{}, b);
    EXPECT_EQ(testing::HashSample(x.sample), testing::HashSample(y.sample));
    EXPECT_EQ(x.ProvenanceJson(), y.ProvenanceJson());
  }
}

TEST(TmaTest, WindowAlgebraAndLabelSoundness) {
  World w;
  TmaConfig cfg;
  cfg.p_trans = 1.0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    const auto out = ApplyTma(w.sample, w.pool, cfg, rng);
    const int s = out.decisions.once ? 4 : 2;
    const int e = out.decisions.once ? 8 : 5;
    ASSERT_EQ(out.window_begin, s);
    ASSERT_EQ(out.window_end, e);
    for (int i = 0; i < 8; ++i) {
      if (i >= s && i < e) continue;
      ASSERT_EQ(out.sample.frames[i], w.sample.frames[i]);
      ASSERT_EQ(out.sample.masks[i], w.sample.masks[i]);
    }
    for (const auto& p : out.provenance) {
      if (p.op == "window" || p.op == "cut") continue;
      EXPECT_GE(p.begin, s);
      EXPECT_LE(p.end, e);
    }
    const auto labels = out.LabelIndices();
    EXPECT_FALSE(out.transition_labels[0]);
    EXPECT_LE(labels.size(), 2u);
    for (int k = 1; k < 8; ++k) {
      const auto& a = out.origins[k - 1];
      const auto& b = out.origins[k];
      const bool consecutive = a.source == b.source && b.frame == a.frame + 1;
      if (!out.transition_labels[k]) {
        EXPECT_TRUE(consecutive) << seed << " frame " << k;
        continue;
      }
      bool event = false;
      for (const auto& p : out.provenance) {
        const bool covers = (p.begin <= k && k < p.end) != (p.begin <= k - 1 && k - 1 < p.end);
        event |= (p.op == "affine_strong" || p.op == "hflip") &&
                 ((p.begin <= k && k < p.end) || covers);
      }
      EXPECT_TRUE(!consecutive || event) << seed << " frame " << k;
    }
  }
}

TEST(TmaTest, CopyModeMasksAreTranslatedOriginals) {
  World w;
  TmaConfig cfg;
  cfg.p_trans = cfg.p_cut = cfg.p_copy = 1.0;
  cfg.p_same = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto out = ApplyTma(w.sample, w.pool, cfg, rng);
    ASSERT_TRUE(out.decisions.copy);
    double bx = 0, by = 0;
    for (const auto& p : out.provenance) {
      if (p.op == "gtranslation") {
        bx = p.params["translate"][0].get<double>();
        by = p.params["translate"][1].get<double>();
      }
    }
    for (int i = out.window_begin; i < out.window_end; ++i) {
      auto moved = GradualTranslation(w.sample.frames[i], w.sample.masks[i],
                                      i - out.window_begin, 4, bx, by);
      if (out.decisions.hflip) moved = HFlip(moved.frame, moved.mask);
      ASSERT_EQ(out.sample.masks[i], moved.mask) << seed << " " << i;
    }
  }
}

TEST(TmaTest, ResizesMismatchedDonors) {
  World w;
  FrameSequenceSample big;
  big.video_id = "big";
  for (int t = 0; t < 8; ++t) {
    big.frames.push_back(testing::SolidFrame(64, 96, {200, 0, 0}));
    big.masks.push_back(Mask(64, 96));
  }
  InMemoryDonors donors({big});
  TmaConfig cfg;
  cfg.p_trans = cfg.p_cut = 1.0;
  cfg.p_same = 0.0;
  Rng rng(3);
  const auto out = ApplyTma(w.sample, DonorPool{&donors, std::nullopt}, cfg, rng);
  bool logged = false;
  for (const auto& p : out.provenance) logged |= p.op == "resize";
  EXPECT_TRUE(logged);
  for (const auto& f : out.sample.frames) EXPECT_TRUE(f.same_shape(32, 48));

  cfg.resize_donors = false;
  Rng rng2(3);
  EXPECT_EQ(CodeOf([&] { ApplyTma(w.sample, DonorPool{&donors, std::nullopt}, cfg, rng2); }),
            ErrorCode::kIncompatibleDonorSize);
}

TEST(TmaTest, ShortForeignDonorIsPadded) {
  World w;
  auto d = World::MakeDonors()[1];
  d.frames.resize(3);
  d.masks.resize(3);
  InMemoryDonors donors({d});
  TmaConfig cfg;
  cfg.p_trans = cfg.p_cut = cfg.p_once = 1.0;
  cfg.p_same = cfg.p_copy = cfg.p_hflip = 0.0;
  Rng rng(5);
  const auto out = ApplyTma(w.sample, DonorPool{&donors, std::nullopt}, cfg, rng);
  for (int i = 4; i < 8; ++i) EXPECT_EQ(out.origins[i].frame, std::min(i, 2));
}

TEST(TmaTest, Errors) {
  World w;
  TmaConfig cfg;
  cfg.clip_length = 6;
  Rng rng(1);
  EXPECT_EQ(CodeOf([&] { ApplyTma(w.sample, w.pool, cfg, rng); }), ErrorCode::kInvalidArgument);

  cfg = TmaConfig{};
  cfg.p_trans = cfg.p_cut = 1.0;
  cfg.p_same = 0.0;
  EXPECT_EQ(CodeOf([&] { ApplyTma(w.sample, DonorPool{}, cfg, rng); }),
            ErrorCode::kDonorUnavailable);
  cfg.p_same = 1.0;
  EXPECT_EQ(CodeOf([&] { ApplyTma(w.sample, DonorPool{&w.donors, std::nullopt}, cfg, rng); }),
            ErrorCode::kDonorUnavailable);
  cfg.p_hflip = 1.5;
  EXPECT_EQ(CodeOf([&] { ApplyTma(w.sample, w.pool, cfg, rng); }), ErrorCode::kInvalidConfig);
}

TEST(TmaConfigTest, NestedAndDottedKeys) {
  const auto nested = TmaConfig::FromJson(json::parse(R"({
    "p_trans": 0.3, "clip_length": 6,
    "affine": {"strong": {"rotation": 40, "scale_min": 0.4}},
    "seed": 9})"));
  const auto dotted = TmaConfig::FromJson(json::parse(R"({
    "p_trans": 0.3, "clip_length": 6,
    "affine.strong.rotation": 40, "affine.strong.scale_min": 0.4,
    "seed": 9})"));
  EXPECT_EQ(nested.ToJson(), dotted.ToJson());
  EXPECT_EQ(nested.p_trans, 0.3);
  EXPECT_EQ(nested.strong.rotation_deg, 40);
  EXPECT_EQ(nested.strong.scale_max, AffineRange::Strong().scale_max);
  EXPECT_EQ(nested.seed, 9u);
  EXPECT_EQ(TmaConfig::FromJson(nested.ToJson()).ToJson(), nested.ToJson());

  EXPECT_EQ(CodeOf([] { TmaConfig::FromJson(json::parse(R"({"p_tran": 0.3})")); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { TmaConfig::FromJson(json::parse(R"({"p_cut": -0.1})")); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { TmaConfig::FromJson(json::parse(R"({"clip_length": 1})")); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { TmaConfig::FromJson(json::parse(R"({"p_cut": "high"})")); }),
            ErrorCode::kInvalidConfig);
}

TEST(TmaTest, ResampleLimitRetriesEmptyClips) {
  // The object is only visible inside the single-transition window, so a
  // foreign cut without copy always leaves an empty clip.
  World w;
  FrameSequenceSample late = w.sample;
  for (int i = 0; i < 4; ++i) late.masks[i] = Mask(32, 48);
  TmaConfig cfg;
  cfg.p_trans = cfg.p_once = cfg.p_cut = 1.0;
  cfg.p_same = cfg.p_copy = 0.0;
  cfg.resample_limit = 3;
  Rng rng(8);
  const auto out = ApplyTma(late, w.pool, cfg, rng);
  int retries = 0;
  for (const auto& p : out.provenance) retries += p.op == "resample";
  EXPECT_EQ(retries, 3);

  // With copy mode available the retry loop stops at the first clip that
  // keeps some foreground.
  cfg.p_copy = 0.5;
  cfg.resample_limit = 50;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    const auto o = ApplyTma(late, w.pool, cfg, r);
    bool any = false;
    for (const auto& m : o.sample.masks) any |= !IsEmpty(m);
    EXPECT_TRUE(any) << seed;
  }
}

}  // namespace
}  // namespace cutvos
