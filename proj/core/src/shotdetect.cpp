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

#include "cutvos/shotdetect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cutvos/error.hpp"
#include "cutvos/image_io.hpp"

namespace cutvos {
namespace {

using Histogram = std::array<double, 3 * HistogramScorer::kBins>;

Histogram ColorHistogram(const Frame& frame) {
  Histogram h{};
  auto data = frame.data();
  for (std::size_t i = 0; i < data.size(); i += 3) {
    for (int ch = 0; ch < 3; ++ch) {
      h[ch * HistogramScorer::kBins + data[i + ch] / (256 / HistogramScorer::kBins)] += 1.0;
    }
  }
  const double n = static_cast<double>(frame.pixel_count());
  for (auto& v : h) v /= n;
  return h;
}

bool ParseDouble(std::string_view text, double& out) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return false;
  std::istringstream ss{std::string(text)};
  ss.imbue(std::locale::classic());
  ss >> out;
  return !ss.fail() && ss.eof();
}

}  // namespace

HistogramScorer::HistogramScorer(int window_size) : window_size_(window_size) {
  if (window_size < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
}

double HistogramScorer::Score(const Frame& current, std::span<const Frame> previous) const {
  if (previous.empty()) throw Error(ErrorCode::kEmptyWindow, "no previous frame");
  const Frame& last = previous.back();
  if (!current.same_shape(last)) {
    throw Error(ErrorCode::kDimensionMismatch, "frames differ in size");
  }
  const Histogram a = ColorHistogram(current);
  const Histogram b = ColorHistogram(last);
  double intersection = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) intersection += std::min(a[i], b[i]);
  const double hist_distance = 1.0 - intersection / 3.0;

  auto ca = current.data();
  auto cb = last.data();
  double abs_diff = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) abs_diff += std::abs(int{ca[i]} - int{cb[i]});
  const double pixel_distance = abs_diff / (255.0 * static_cast<double>(ca.size()));

  return std::clamp(0.5 * hist_distance + 0.5 * pixel_distance, 0.0, 1.0);
}

void DetectorConfig::Validate() const {
  if (!(tau_tr >= 0.0 && tau_tr <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tau_tr must lie in [0, 1]");
  }
  if (min_shot_len < 1) throw Error(ErrorCode::kInvalidConfig, "min_shot_len must be >= 1");
}

std::vector<double> ScoreFrames(std::span<const Frame> frames, const TransitionScorer& scorer) {
  std::vector<double> scores(frames.size(), 0.0);
  const auto window = static_cast<std::size_t>(scorer.window_size());
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const std::size_t first = t > window ? t - window : 0;
    scores[t] = scorer.Score(frames[t], frames.subspan(first, t - first));
  }
  return scores;
}

std::vector<int> DetectTransitions(std::span<const double> scores, const DetectorConfig& config) {
  config.Validate();
  std::vector<int> out;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (!(scores[t] >= config.tau_tr)) continue;
    if (!out.empty() && static_cast<int>(t) - out.back() < config.min_shot_len) continue;
    out.push_back(static_cast<int>(t));
  }
  return out;
}

std::vector<int> DetectTransitions(std::span<const Frame> frames, const TransitionScorer& scorer,
                                   const DetectorConfig& config) {
  const auto scores = ScoreFrames(frames, scorer);
  return DetectTransitions(scores, config);
}

ShotAnnotation ScoresToShots(std::span<const int> transitions, int length) {
  if (length <= 0) throw Error(ErrorCode::kOutOfRange, "length must be positive");
  ShotAnnotation shots;
  int start = 0;
  for (int t : transitions) {
    if (t <= start || t >= length) {
      throw Error(ErrorCode::kOutOfRange,
                  "transition " + std::to_string(t) + " not increasing within [1, " +
                      std::to_string(length) + ")");
    }
    shots.segments.push_back({start, t, std::nullopt, std::nullopt});
    start = t;
  }
  shots.segments.push_back({start, length, std::nullopt, std::nullopt});
  return shots;
}

std::vector<double> ReadScoresFile(const std::filesystem::path& path) {
  std::istringstream in(io::ReadFile(path));
  std::vector<double> scores;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (view.empty() || view.front() == '#') continue;
    const auto comma = view.rfind(',');
    const std::string_view field = comma == std::string_view::npos ? view : view.substr(comma + 1);
    double value = 0.0;
    if (!ParseDouble(field, value)) {
      if (scores.empty() && line_no == 1) continue;  // header
      if (field.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line_no) + ": score outside [0, 1]");
    }
    scores.push_back(value);
  }
  return scores;
}

}  // namespace cutvos
