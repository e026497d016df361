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

#include "cutvos/tma.hpp"

#include <algorithm>
#include <cmath>

#include "cutvos/error.hpp"

namespace cutvos {
namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

void Flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, nlohmann::json>>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      Flatten(value, name, out);
    } else {
      out.emplace_back(name, value);
    }
  }
}

double* AffineField(AffineRange& r, const std::string& field) {
  if (field == "rotation") return &r.rotation_deg;
  if (field == "scale_min") return &r.scale_min;
  if (field == "scale_max") return &r.scale_max;
  if (field == "translate") return &r.translate;
  if (field == "shear") return &r.shear_deg;
  return nullptr;
}

struct Clip {
  std::vector<Frame> frames;
  std::vector<Mask> masks;
  std::vector<FrameOrigin> origins;
  std::string donor;
};

Clip FetchForeignDonor(const DonorSource& source, int length, int height, int width,
                       Rng& rng, std::vector<ProvenanceEntry>& log, int s, int e) {
  const std::size_t index = rng.Index(source.size());
  const int donor_len = source.length(index);
  if (donor_len <= 0) {
    throw Error(ErrorCode::kDonorUnavailable, "donor " + source.id(index) + " is empty");
  }
  const int start =
      donor_len >= length ? static_cast<int>(rng.Index(donor_len - length + 1)) : 0;
  Clip clip;
  clip.donor = source.id(index);
  clip.frames = source.Fetch(index, start, std::min(length, donor_len));
  for (int i = 0; i < length; ++i) {
    const int src = std::min(start + i, donor_len - 1);
    clip.origins.push_back({clip.donor, src});
  }
  while (static_cast<int>(clip.frames.size()) < length) {
    clip.frames.push_back(clip.frames.back());
  }
  clip.masks.assign(length, Mask(height, width));
  log.push_back({"donor_foreign",
                 {{"start", start}, {"donor_length", donor_len}},
                 s,
                 e,
                 clip.donor});
  return clip;
}

bool AllMasksEmpty(const std::vector<Mask>& masks) {
  return std::all_of(masks.begin(), masks.end(), [](const Mask& m) { return IsEmpty(m); });
}

TmaOutcome AttemptOnce(const FrameSequenceSample& sample, const DonorPool& donors,
                       const TmaConfig& cfg, Rng& rng) {
  const int T = cfg.clip_length;
  const int H = sample.height();
  const int W = sample.width();
  const int origin_base = donors.timeline ? donors.timeline->current_start : 0;

  TmaOutcome out;
  out.sample = sample;
  out.transition_labels.assign(T, false);
  for (int i = 0; i < T; ++i) out.origins.push_back({sample.video_id, origin_base + i});
  auto& frames = out.sample.frames;
  auto& masks = out.sample.masks;
  auto& log = out.provenance;

  if (!(rng.Uniform() < cfg.p_trans)) {
    log.push_back({"passthrough", nlohmann::json::object(), 0, 0, ""});
    return out;
  }
  out.decisions.transitioned = true;
  const bool once = rng.Uniform() < cfg.p_once;
  out.decisions.once = once;
  const int s = once ? T / 2 : T / 3;
  const int e = once ? T : T / 3 * 2 + 1;
  out.window_begin = s;
  out.window_end = e;
  log.push_back({"window", {{"once", once}}, s, e, ""});

  if (rng.Uniform() < cfg.p_cut) {
    out.decisions.cut = true;
    const bool same_video = rng.Uniform() < cfg.p_same;
    const bool copy = rng.Uniform() < cfg.p_copy;
    out.decisions.same_video = same_video;
    out.decisions.copy = copy;
    log.push_back({"cut", {{"same_video", same_video}, {"copy", copy}}, s, e, ""});

    Clip donor;
    if (same_video) {
      if (!donors.timeline) {
        throw Error(ErrorCode::kDonorUnavailable, "no timeline for same-video sampling");
      }
      SameVideoSegment seg =
          SampleSameVideoSegment(*donors.timeline, T, rng, cfg.distance_exponent);
      donor.donor = sample.video_id;
      donor.frames = std::move(seg.frames);
      donor.masks = std::move(seg.masks);
      for (int i = 0; i < T; ++i) donor.origins.push_back({sample.video_id, seg.offset + i});
      log.push_back({"donor_same_video", {{"offset", seg.offset}}, s, e, donor.donor});
    } else {
      if (donors.foreign == nullptr || donors.foreign->size() == 0) {
        throw Error(ErrorCode::kDonorUnavailable, "foreign donor pool is empty");
      }
      donor = FetchForeignDonor(*donors.foreign, T, H, W, rng, log, s, e);
    }

    bool resized = false;
    for (int i = s; i < e; ++i) {
      if (donor.frames[i].same_shape(H, W) && donor.masks[i].same_shape(H, W)) continue;
      if (!cfg.resize_donors) {
        throw Error(ErrorCode::kIncompatibleDonorSize,
                    "donor " + donor.donor + " is " +
                        std::to_string(donor.frames[i].height()) + "x" +
                        std::to_string(donor.frames[i].width()));
      }
      donor.frames[i] = ResizeFrame(donor.frames[i], H, W);
      donor.masks[i] = ResizeMask(donor.masks[i], H, W);
      resized = true;
    }
    if (resized) log.push_back({"resize", {{"height", H}, {"width", W}}, s, e, donor.donor});

    // One moderate warp for the whole donor clip.
    const AffineParams moderate = cfg.moderate.Sample(rng);
    log.push_back({"affine_moderate", moderate, s, e, donor.donor});
    for (int i = s; i < e; ++i) {
      auto warped = AffineTransform(donor.frames[i], donor.masks[i], moderate);
      donor.frames[i] = std::move(warped.frame);
      donor.masks[i] = std::move(warped.mask);
    }

    const bool composite = !same_video && copy;
    double base_x = 0.0, base_y = 0.0;
    const int horizon = T / 2;
    if (composite) {
      base_x = rng.Uniform(-cfg.gtranslation_max, cfg.gtranslation_max);
      base_y = rng.Uniform(-cfg.gtranslation_max, cfg.gtranslation_max);
      log.push_back({"gtranslation",
                     {{"translate", {base_x, base_y}}, {"horizon", horizon}},
                     s,
                     e,
                     ""});
      log.push_back({"copy_foreground", nlohmann::json::object(), s, e, donor.donor});
    }
    for (int i = s; i < e; ++i) {
      if (composite) {
        auto moved = GradualTranslation(frames[i], masks[i], i - s, horizon, base_x, base_y);
        donor.frames[i] = CopyForeground(donor.frames[i], moved.frame, moved.mask);
        donor.masks[i] = std::move(moved.mask);
      }
      frames[i] = std::move(donor.frames[i]);
      masks[i] = std::move(donor.masks[i]);
      out.origins[i] = donor.origins[i];
    }
  } else {
    for (int i = s; i < e; ++i) {
      const AffineParams strong = cfg.strong.Sample(rng);
      log.push_back({"affine_strong", strong, i, i + 1, ""});
      auto warped = AffineTransform(frames[i], masks[i], strong);
      frames[i] = std::move(warped.frame);
      masks[i] = std::move(warped.mask);
    }
  }

  if (rng.Uniform() < cfg.p_hflip) {
    out.decisions.hflip = true;
    log.push_back({"hflip", nlohmann::json::object(), s, e, ""});
    for (int i = s; i < e; ++i) {
      auto flipped = HFlip(frames[i], masks[i]);
      frames[i] = std::move(flipped.frame);
      masks[i] = std::move(flipped.mask);
    }
  }

  if (s >= 1) out.transition_labels[s] = true;
  if (e < T) out.transition_labels[e] = true;
  return out;
}

}  // namespace

void TmaConfig::Validate() const {
  for (double p : {p_trans, p_once, p_cut, p_same, p_copy, p_hflip}) {
    if (!IsProbability(p)) {
      throw Error(ErrorCode::kInvalidConfig, "probabilities must lie in [0, 1]");
    }
  }
  if (clip_length < 2) throw Error(ErrorCode::kInvalidConfig, "clip_length must be >= 2");
  if (resample_limit < 0) {
    throw Error(ErrorCode::kInvalidConfig, "resample_limit must be >= 0");
  }
  if (!std::isfinite(distance_exponent) || distance_exponent < 0) {
    throw Error(ErrorCode::kInvalidConfig, "distance_exponent must be >= 0");
  }
  if (!std::isfinite(gtranslation_max) || gtranslation_max < 0) {
    throw Error(ErrorCode::kInvalidConfig, "gtranslation_max must be >= 0");
  }
  moderate.Validate();
  strong.Validate();
}

TmaConfig TmaConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be an object");
  std::vector<std::pair<std::string, nlohmann::json>> flat;
  Flatten(j, "", flat);
  TmaConfig cfg;
  for (const auto& [key, value] : flat) {
    try {
      if (key == "p_trans") cfg.p_trans = value.get<double>();
      else if (key == "p_once") cfg.p_once = value.get<double>();
      else if (key == "p_cut") cfg.p_cut = value.get<double>();
      else if (key == "p_same") cfg.p_same = value.get<double>();
      else if (key == "p_copy") cfg.p_copy = value.get<double>();
      else if (key == "p_hflip") cfg.p_hflip = value.get<double>();
      else if (key == "clip_length") cfg.clip_length = value.get<int>();
      else if (key == "resample_limit") cfg.resample_limit = value.get<int>();
      else if (key == "distance_exponent") cfg.distance_exponent = value.get<double>();
      else if (key == "gtranslation_max") cfg.gtranslation_max = value.get<double>();
      else if (key == "resize_donors") cfg.resize_donors = value.get<bool>();
      else if (key == "seed") {
        if (!value.is_null()) cfg.seed = value.get<std::uint64_t>();
      } else if (key.rfind("affine.moderate.", 0) == 0 || key.rfind("affine.strong.", 0) == 0) {
        const bool moderate = key.rfind("affine.moderate.", 0) == 0;
        AffineRange& range = moderate ? cfg.moderate : cfg.strong;
        const std::string field = key.substr(key.rfind('.') + 1);
        double* slot = AffineField(range, field);
        if (slot == nullptr) throw Error(ErrorCode::kInvalidConfig, "unknown key " + key);
        *slot = value.get<double>();
      } else {
        throw Error(ErrorCode::kInvalidConfig, "unknown key " + key);
      }
    } catch (const nlohmann::json::type_error&) {
      throw Error(ErrorCode::kInvalidConfig, "bad value type for " + key);
    }
  }
  cfg.Validate();
  return cfg;
}

nlohmann::json TmaConfig::ToJson() const {
  nlohmann::json j = {{"p_trans", p_trans},
                      {"p_once", p_once},
                      {"p_cut", p_cut},
                      {"p_same", p_same},
                      {"p_copy", p_copy},
                      {"p_hflip", p_hflip},
                      {"clip_length", clip_length},
                      {"affine", {{"moderate", moderate}, {"strong", strong}}},
                      {"resample_limit", resample_limit},
                      {"distance_exponent", distance_exponent},
                      {"gtranslation_max", gtranslation_max},
                      {"resize_donors", resize_donors}};
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

std::vector<Frame> InMemoryDonors::Fetch(std::size_t index, int start, int count) const {
  const auto& s = samples_.at(index);
  if (start < 0 || count < 0 || start + count > s.length()) {
    throw Error(ErrorCode::kOutOfRange, "donor fetch out of range");
  }
  return {s.frames.begin() + start, s.frames.begin() + start + count};
}

SameVideoSegment SampleSameVideoSegment(const VideoTimeline& timeline, int length,
                                        Rng& rng, double exponent) {
  const int total = static_cast<int>(timeline.frames.size());
  if (static_cast<int>(timeline.masks.size()) != total) {
    throw Error(ErrorCode::kMissingFrame, "timeline frame/mask counts differ");
  }
  if (length <= 0 || total <= length) {
    throw Error(ErrorCode::kTimelineTooShort,
                "timeline of " + std::to_string(total) + " frames cannot supply another " +
                    std::to_string(length) + "-frame window");
  }
  const int n_offsets = total - length + 1;
  std::vector<double> cumulative(n_offsets);
  double sum = 0.0;
  for (int o = 0; o < n_offsets; ++o) {
    const int d = std::abs(o - timeline.current_start);
    const double w = d == 0 ? 0.0 : std::pow(static_cast<double>(d), exponent);
    sum += w;
    cumulative[o] = sum;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::kTimelineTooShort, "no offset away from the current window");
  }
  const double target = rng.Uniform() * sum;
  int offset = static_cast<int>(
      std::upper_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
  offset = std::min(offset, n_offsets - 1);

  SameVideoSegment seg;
  seg.offset = offset;
  seg.frames.assign(timeline.frames.begin() + offset, timeline.frames.begin() + offset + length);
  seg.masks.assign(timeline.masks.begin() + offset, timeline.masks.begin() + offset + length);
  return seg;
}

std::vector<int> TmaOutcome::LabelIndices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < transition_labels.size(); ++i) {
    if (transition_labels[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

nlohmann::json TmaOutcome::ProvenanceJson() const {
  nlohmann::json origins_json = nlohmann::json::array();
  for (const auto& o : origins) origins_json.push_back({o.source, o.frame});
  return {{"video_id", sample.video_id},
          {"object_id", sample.object_id},
          {"labels", LabelIndices()},
          {"window", {window_begin, window_end}},
          {"decisions",
           {{"transitioned", decisions.transitioned},
            {"once", decisions.once},
            {"cut", decisions.cut},
            {"same_video", decisions.same_video},
            {"copy", decisions.copy},
            {"hflip", decisions.hflip}}},
          {"origins", origins_json},
          {"ops", provenance}};
}

void to_json(nlohmann::json& j, const ProvenanceEntry& e) {
  j = {{"op", e.op}, {"params", e.params}, {"range", {e.begin, e.end}}};
  j["donor"] = e.donor.empty() ? nlohmann::json(nullptr) : nlohmann::json(e.donor);
}

TmaOutcome ApplyTma(const FrameSequenceSample& sample, const DonorPool& donors,
                    const TmaConfig& config, Rng& rng) {
  config.Validate();
  sample.Validate();
  if (sample.length() != config.clip_length) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample has " + std::to_string(sample.length()) +
                    " frames; config expects " + std::to_string(config.clip_length));
  }
  std::vector<ProvenanceEntry> retries;
  for (int attempt = 0;; ++attempt) {
    TmaOutcome out = AttemptOnce(sample, donors, config, rng);
    const bool degenerate = out.decisions.transitioned && AllMasksEmpty(out.sample.masks);
    if (!degenerate || attempt >= config.resample_limit) {
      out.provenance.insert(out.provenance.begin(), retries.begin(), retries.end());
      return out;
    }
    retries.push_back({"resample", {{"attempt", attempt + 1}}, 0, 0, ""});
  }
}

}  // namespace cutvos
