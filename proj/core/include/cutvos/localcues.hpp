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

#ifndef CUTVOS_LOCALCUES_HPP_
#define CUTVOS_LOCALCUES_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutvos/image.hpp"

namespace cutvos {

/// Low-resolution h x w x c feature map. `scale` is grid rows per full-
/// resolution row.
struct FeatureGrid {
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<float> values;
  double scale = 1.0;

  FeatureGrid() = default;
  FeatureGrid(int rows, int cols, int channels, double grid_scale = 1.0)
      : h(rows), w(cols), c(channels),
        values(static_cast<std::size_t>(rows) * cols * channels, 0.0f),
        scale(grid_scale) {}

  std::span<const float> cell(int row, int col) const {
    return {values.data() + (static_cast<std::size_t>(row) * w + col) * c,
            static_cast<std::size_t>(c)};
  }
  std::span<float> cell(int row, int col) {
    return {values.data() + (static_cast<std::size_t>(row) * w + col) * c,
            static_cast<std::size_t>(c)};
  }

  void Validate() const;
};

/// "FGRD" magic, then h, w, c as little-endian uint32, then h*w*c
/// little-endian float32 values in row-major, channel-last order.
FeatureGrid ReadFeatureGrid(const std::filesystem::path& path);
void WriteFeatureGrid(const std::filesystem::path& path, const FeatureGrid& grid);

/// Mean CIELAB colour of each `cell_size` x `cell_size` block (partial blocks
/// at the right / bottom edge included).
FeatureGrid ComputeColorFeatures(const Frame& frame, int cell_size = 16);

/// A grid cell is foreground when at least half of the full-resolution pixels
/// mapping into it are. If that leaves nothing, any foreground pixel counts.
Mask DownsampleMask(const Mask& mask, int rows, int cols);

struct GraphEdge {
  int u = 0;  // row-major cell indices, u < v
  int v = 0;
  double weight = 0.0;
};

/// 4-neighbour graph over masked cells. Edges are listed row-major by `u`,
/// right neighbour before bottom neighbour; this order is the tie-break.
struct MaskGraph {
  int h = 0;
  int w = 0;
  std::vector<int> nodes;
  std::vector<GraphEdge> edges;
};

/// Edge weight is the Euclidean distance between cell feature vectors.
MaskGraph BuildMaskGraph(const FeatureGrid& features, const Mask& grid_mask);

struct GridPoint {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct RegionPartition {
  int h = 0;
  int w = 0;
  int k = 0;
  /// 0 outside the mask, 1..k for regions (numbered by first cell row-major).
  std::vector<int> labels;
  /// MST edges that were cut, largest first.
  std::vector<GraphEdge> removed_edges;
  /// Connected components of the mask itself.
  int mask_components = 0;

  int label(int row, int col) const { return labels[static_cast<std::size_t>(row) * w + col]; }
};

/// Kruskal spanning forest over dissimilarity, then removal of the k - m
/// heaviest forest edges (m = mask components, k clamped to >= m). Weight
/// ties are broken by edge index in both steps.
RegionPartition MstPartition(const MaskGraph& graph, int k);

/// Per region, the cell farthest (Euclidean) from any non-region cell, with
/// the grid border counting as outside. Ties go to the smallest row-major
/// index.
std::vector<GridPoint> RegionCenters(const RegionPartition& partition);

struct RegionDescriptor {
  std::vector<float> mean_feature;
  double area_fraction = 0.0;
  double centroid_x = 0.0;  // normalised to [0, 1]
  double centroid_y = 0.0;
};

struct PointPrompt {
  double x = 0.0;  // full-resolution pixel coordinates
  double y = 0.0;
  bool positive = false;
};

struct LocalCueSet {
  /// Object too small: only a whole-object descriptor, no prompts.
  bool skipped = false;
  double mask_area_fraction = 0.0;
  std::vector<RegionDescriptor> descriptors;
  /// prompts[i]: region i's centre positive, every other centre negative.
  std::vector<std::vector<PointPrompt>> prompts;
  std::vector<GridPoint> centers;
};

/// `full_mask` is the full-resolution conditional mask. Returns a skipped set
/// when its area fraction is below tau_p.
LocalCueSet ExtractLocalCues(const FeatureGrid& features, const Mask& full_mask,
                             const RegionPartition& partition,
                             std::span<const GridPoint> centers, double tau_p);

struct LocalCueOptions {
  int groups = 4;
  double tau_p = 0.025;
  int cell_size = 16;
};

/// Colour features, graph, partition, centres and cues in one call. An empty
/// mask, or one too small for the options, yields a skipped set.
LocalCueSet BuildLocalCues(const Frame& frame, const Mask& mask, const LocalCueOptions& options,
                           RegionPartition* partition_out = nullptr);

/// Same, with a caller-supplied feature grid.
LocalCueSet BuildLocalCues(const FeatureGrid& features, const Mask& mask,
                           const LocalCueOptions& options,
                           RegionPartition* partition_out = nullptr);

nlohmann::json ToJson(const LocalCueSet& cues);

}  // namespace cutvos

#endif  // CUTVOS_LOCALCUES_HPP_
