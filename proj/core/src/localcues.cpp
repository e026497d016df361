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

#include "cutvos/localcues.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <numeric>

#include "cutvos/error.hpp"
#include "cutvos/image_io.hpp"

namespace cutvos {
namespace {

constexpr char kMagic[4] = {'F', 'G', 'R', 'D'};

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

// Squared 1-D distance transform (Felzenszwalb & Huttenlocher lower envelope).
void Edt1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == inf) continue;
    if (f[v[k]] == inf) {
      v[k] = q;
      continue;
    }
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (f[v[0]] == inf) {
    std::fill(d.begin(), d.end(), inf);
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

// sRGB (0..255) to CIELAB under D65.
void RgbToLab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8, double lab[3]) {
  auto lin = [](double c) {
    c /= 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double r = lin(r8), g = lin(g8), b = lin(b8);
  const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  auto f = [](double t) {
    constexpr double e = 216.0 / 24389.0;
    constexpr double k = 24389.0 / 27.0;
    return t > e ? std::cbrt(t) : (k * t + 16.0) / 116.0;
  };
  const double fx = f(x), fy = f(y), fz = f(z);
  lab[0] = 116.0 * fy - 16.0;
  lab[1] = 500.0 * (fx - fy);
  lab[2] = 200.0 * (fy - fz);
}

std::uint32_t ToLittle(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
  return v;
}

// Labels every grid cell with the region of its nearest labelled cell
// (4-neighbour BFS, row-major seeding order breaks ties).
std::vector<int> NearestRegion(const RegionPartition& p) {
  std::vector<int> nearest(p.labels);
  std::deque<int> queue;
  for (int i = 0; i < static_cast<int>(nearest.size()); ++i) {
    if (nearest[i] > 0) queue.push_back(i);
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    const int r = i / p.w, c = i % p.w;
    const int nbr[4][2] = {{r - 1, c}, {r, c - 1}, {r, c + 1}, {r + 1, c}};
    for (const auto& n : nbr) {
      if (n[0] < 0 || n[0] >= p.h || n[1] < 0 || n[1] >= p.w) continue;
      const int j = n[0] * p.w + n[1];
      if (nearest[j] != 0) continue;
      nearest[j] = nearest[i];
      queue.push_back(j);
    }
  }
  return nearest;
}

RegionDescriptor WholeObjectDescriptor(const FeatureGrid& features, const Mask& grid_mask,
                                       double area_fraction) {
  RegionDescriptor d;
  d.mean_feature.assign(features.c, 0.0f);
  d.area_fraction = area_fraction;
  std::vector<double> acc(features.c, 0.0);
  double cx = 0, cy = 0;
  int n = 0;
  for (int r = 0; r < features.h; ++r) {
    for (int c = 0; c < features.w; ++c) {
      if (grid_mask.at(r, c) == 0) continue;
      auto cell = features.cell(r, c);
      for (int ch = 0; ch < features.c; ++ch) acc[ch] += cell[ch];
      cx += c + 0.5;
      cy += r + 0.5;
      ++n;
    }
  }
  if (n > 0) {
    for (int ch = 0; ch < features.c; ++ch) d.mean_feature[ch] = static_cast<float>(acc[ch] / n);
    d.centroid_x = cx / n / features.w;
    d.centroid_y = cy / n / features.h;
  }
  return d;
}

}  // namespace

void FeatureGrid::Validate() const {
  if (h <= 0 || w <= 0 || c <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "feature grid needs positive h, w, c");
  }
  if (values.size() != static_cast<std::size_t>(h) * w * c) {
    throw Error(ErrorCode::kDimensionMismatch, "feature grid value count mismatch");
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteParams, "non-finite feature value");
  }
}

FeatureGrid ReadFeatureGrid(const std::filesystem::path& path) {
  const std::string bytes = io::ReadFile(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kParseError, path.string() + ": not a feature grid");
  }
  std::uint32_t dims[3];
  std::memcpy(dims, bytes.data() + 4, sizeof(dims));
  FeatureGrid grid(static_cast<int>(ToLittle(dims[0])), static_cast<int>(ToLittle(dims[1])),
                   static_cast<int>(ToLittle(dims[2])));
  const std::size_t expected = 16 + grid.values.size() * sizeof(float);
  if (grid.h <= 0 || grid.w <= 0 || grid.c <= 0 || bytes.size() != expected) {
    throw Error(ErrorCode::kParseError, path.string() + ": size does not match header");
  }
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    std::uint32_t raw;
    std::memcpy(&raw, bytes.data() + 16 + i * 4, 4);
    grid.values[i] = std::bit_cast<float>(ToLittle(raw));
  }
  grid.Validate();
  return grid;
}

void WriteFeatureGrid(const std::filesystem::path& path, const FeatureGrid& grid) {
  grid.Validate();
  std::string bytes(16 + grid.values.size() * 4, '\0');
  std::memcpy(bytes.data(), kMagic, 4);
  const std::uint32_t dims[3] = {ToLittle(static_cast<std::uint32_t>(grid.h)),
                                 ToLittle(static_cast<std::uint32_t>(grid.w)),
                                 ToLittle(static_cast<std::uint32_t>(grid.c))};
  std::memcpy(bytes.data() + 4, dims, sizeof(dims));
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const std::uint32_t raw = ToLittle(std::bit_cast<std::uint32_t>(grid.values[i]));
    std::memcpy(bytes.data() + 16 + i * 4, &raw, 4);
  }
  io::WriteFileAtomic(path, bytes);
}

FeatureGrid ComputeColorFeatures(const Frame& frame, int cell_size) {
  if (cell_size < 1) throw Error(ErrorCode::kInvalidArgument, "cell size must be >= 1");
  const int rows = (frame.height() + cell_size - 1) / cell_size;
  const int cols = (frame.width() + cell_size - 1) / cell_size;
  FeatureGrid grid(rows, cols, 3, 1.0 / cell_size);
  std::vector<double> acc(static_cast<std::size_t>(rows) * cols * 3, 0.0);
  std::vector<int> count(static_cast<std::size_t>(rows) * cols, 0);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const std::size_t cell = static_cast<std::size_t>(y / cell_size) * cols + x / cell_size;
      double lab[3];
      auto px = frame.pixel(y, x);
      RgbToLab(px[0], px[1], px[2], lab);
      for (int ch = 0; ch < 3; ++ch) acc[cell * 3 + ch] += lab[ch];
      ++count[cell];
    }
  }
  for (std::size_t cell = 0; cell < count.size(); ++cell) {
    for (int ch = 0; ch < 3; ++ch) {
      grid.values[cell * 3 + ch] = static_cast<float>(acc[cell * 3 + ch] / count[cell]);
    }
  }
  return grid;
}

Mask DownsampleMask(const Mask& mask, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw Error(ErrorCode::kInvalidArgument, "grid must be positive");
  std::vector<int> fg(static_cast<std::size_t>(rows) * cols, 0);
  std::vector<int> total(fg.size(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    const int r = static_cast<int>(static_cast<long long>(y) * rows / mask.height());
    for (int x = 0; x < mask.width(); ++x) {
      const int c = static_cast<int>(static_cast<long long>(x) * cols / mask.width());
      const std::size_t cell = static_cast<std::size_t>(r) * cols + c;
      ++total[cell];
      fg[cell] += mask.at(y, x) != 0;
    }
  }
  Mask out(rows, cols);
  bool any = false;
  for (std::size_t i = 0; i < fg.size(); ++i) {
    if (total[i] > 0 && 2 * fg[i] >= total[i] && fg[i] > 0) {
      out.data()[i] = 1;
      any = true;
    }
  }
  if (!any) {
    for (std::size_t i = 0; i < fg.size(); ++i) out.data()[i] = fg[i] > 0 ? 1 : 0;
  }
  return out;
}

MaskGraph BuildMaskGraph(const FeatureGrid& features, const Mask& grid_mask) {
  if (!grid_mask.same_shape(features.h, features.w)) {
    throw Error(ErrorCode::kDimensionMismatch, "mask does not match feature grid");
  }
  MaskGraph graph;
  graph.h = features.h;
  graph.w = features.w;
  auto distance = [&](int r0, int c0, int r1, int c1) {
    auto a = features.cell(r0, c0);
    auto b = features.cell(r1, c1);
    double sum = 0.0;
    for (int ch = 0; ch < features.c; ++ch) {
      const double d = static_cast<double>(a[ch]) - b[ch];
      sum += d * d;
    }
    return std::sqrt(sum);
  };
  for (int r = 0; r < features.h; ++r) {
    for (int c = 0; c < features.w; ++c) {
      if (grid_mask.at(r, c) == 0) continue;
      const int u = r * features.w + c;
      graph.nodes.push_back(u);
      if (c + 1 < features.w && grid_mask.at(r, c + 1) != 0) {
        graph.edges.push_back({u, u + 1, distance(r, c, r, c + 1)});
      }
      if (r + 1 < features.h && grid_mask.at(r + 1, c) != 0) {
        graph.edges.push_back({u, u + features.w, distance(r, c, r + 1, c)});
      }
    }
  }
  if (graph.nodes.empty()) throw Error(ErrorCode::kEmptyMask, "mask has no cells");
  return graph;
}

RegionPartition MstPartition(const MaskGraph& graph, int k) {
  const int n_nodes = static_cast<int>(graph.nodes.size());
  if (n_nodes == 0) throw Error(ErrorCode::kEmptyMask, "graph has no nodes");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (k > n_nodes) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds " + std::to_string(n_nodes) + " cells");
  }
  const int n_cells = graph.h * graph.w;

  std::vector<int> order(graph.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return graph.edges[a].weight < graph.edges[b].weight;
  });
  DisjointSets forest(n_cells);
  std::vector<int> tree;
  for (int e : order) {
    if (forest.Union(graph.edges[e].u, graph.edges[e].v)) tree.push_back(e);
  }

  RegionPartition p;
  p.h = graph.h;
  p.w = graph.w;
  p.mask_components = n_nodes - static_cast<int>(tree.size());
  p.k = std::max(k, p.mask_components);

  // Heaviest first; equal weights keep edge-index order.
  std::vector<int> by_weight = tree;
  std::stable_sort(by_weight.begin(), by_weight.end(), [&](int a, int b) {
    return graph.edges[a].weight > graph.edges[b].weight;
  });
  const int n_remove = p.k - p.mask_components;
  std::vector<bool> removed(graph.edges.size(), false);
  for (int i = 0; i < n_remove; ++i) {
    removed[by_weight[i]] = true;
    p.removed_edges.push_back(graph.edges[by_weight[i]]);
  }

  DisjointSets regions(n_cells);
  for (int e : tree) {
    if (!removed[e]) regions.Union(graph.edges[e].u, graph.edges[e].v);
  }
  p.labels.assign(n_cells, 0);
  std::vector<int> root_label(n_cells, 0);
  int next = 0;
  for (int u : graph.nodes) {  // nodes are row-major
    const int root = regions.Find(u);
    if (root_label[root] == 0) root_label[root] = ++next;
    p.labels[u] = root_label[root];
  }
  return p;
}

std::vector<GridPoint> RegionCenters(const RegionPartition& p) {
  const double inf = std::numeric_limits<double>::infinity();
  const int ph = p.h + 2, pw = p.w + 2;
  std::vector<GridPoint> centers(p.k);
  std::vector<double> dist(static_cast<std::size_t>(ph) * pw);
  for (int region = 1; region <= p.k; ++region) {
    for (int r = 0; r < ph; ++r) {
      for (int c = 0; c < pw; ++c) {
        const bool inside = r >= 1 && r <= p.h && c >= 1 && c <= p.w &&
                            p.label(r - 1, c - 1) == region;
        dist[static_cast<std::size_t>(r) * pw + c] = inside ? inf : 0.0;
      }
    }
    std::vector<double> f, d;
    f.resize(ph);
    d.resize(ph);
    for (int c = 0; c < pw; ++c) {
      for (int r = 0; r < ph; ++r) f[r] = dist[static_cast<std::size_t>(r) * pw + c];
      Edt1d(f, d);
      for (int r = 0; r < ph; ++r) dist[static_cast<std::size_t>(r) * pw + c] = d[r];
    }
    f.resize(pw);
    d.resize(pw);
    for (int r = 0; r < ph; ++r) {
      for (int c = 0; c < pw; ++c) f[c] = dist[static_cast<std::size_t>(r) * pw + c];
      Edt1d(f, d);
      for (int c = 0; c < pw; ++c) dist[static_cast<std::size_t>(r) * pw + c] = d[c];
    }
    double best = -1.0;
    for (int r = 0; r < p.h; ++r) {
      for (int c = 0; c < p.w; ++c) {
        if (p.label(r, c) != region) continue;
        const double v = dist[static_cast<std::size_t>(r + 1) * pw + c + 1];
        if (v > best) {
          best = v;
          centers[region - 1] = {r, c};
        }
      }
    }
  }
  return centers;
}

LocalCueSet ExtractLocalCues(const FeatureGrid& features, const Mask& full_mask,
                             const RegionPartition& partition,
                             std::span<const GridPoint> centers, double tau_p) {
  if (!(tau_p >= 0.0 && tau_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau_p must lie in [0, 1]");
  }
  if (partition.h != features.h || partition.w != features.w) {
    throw Error(ErrorCode::kDimensionMismatch, "partition does not match feature grid");
  }
  if (static_cast<int>(centers.size()) != partition.k) {
    throw Error(ErrorCode::kInvalidArgument, "one centre per region required");
  }
  const int H = full_mask.height();
  const int W = full_mask.width();
  const double total = static_cast<double>(full_mask.pixel_count());

  LocalCueSet cues;
  cues.mask_area_fraction = static_cast<double>(CountForeground(full_mask)) / total;
  if (cues.mask_area_fraction < tau_p) {
    cues.skipped = true;
    Mask grid_mask(features.h, features.w);
    for (std::size_t i = 0; i < partition.labels.size(); ++i) {
      grid_mask.data()[i] = partition.labels[i] > 0 ? 1 : 0;
    }
    cues.descriptors.push_back(
        WholeObjectDescriptor(features, grid_mask, cues.mask_area_fraction));
    return cues;
  }

  const std::vector<int> nearest = NearestRegion(partition);
  std::vector<double> area(partition.k, 0.0);
  for (int y = 0; y < H; ++y) {
    const int r = static_cast<int>(static_cast<long long>(y) * features.h / H);
    for (int x = 0; x < W; ++x) {
      if (full_mask.at(y, x) == 0) continue;
      const int c = static_cast<int>(static_cast<long long>(x) * features.w / W);
      const int label = nearest[static_cast<std::size_t>(r) * features.w + c];
      if (label > 0) area[label - 1] += 1.0;
    }
  }

  for (int region = 1; region <= partition.k; ++region) {
    RegionDescriptor d;
    std::vector<double> acc(features.c, 0.0);
    double cx = 0, cy = 0;
    int n = 0;
    for (int r = 0; r < features.h; ++r) {
      for (int c = 0; c < features.w; ++c) {
        if (partition.label(r, c) != region) continue;
        auto cell = features.cell(r, c);
        for (int ch = 0; ch < features.c; ++ch) acc[ch] += cell[ch];
        cx += c + 0.5;
        cy += r + 0.5;
        ++n;
      }
    }
    d.mean_feature.resize(features.c);
    for (int ch = 0; ch < features.c; ++ch) d.mean_feature[ch] = static_cast<float>(acc[ch] / n);
    d.area_fraction = area[region - 1] / total;
    d.centroid_x = cx / n / features.w;
    d.centroid_y = cy / n / features.h;
    cues.descriptors.push_back(std::move(d));
  }

  cues.centers.assign(centers.begin(), centers.end());
  for (int i = 0; i < partition.k; ++i) {
    std::vector<PointPrompt> prompts;
    for (int j = 0; j < partition.k; ++j) {
      prompts.push_back({(centers[j].col + 0.5) * W / features.w,
                         (centers[j].row + 0.5) * H / features.h, i == j});
    }
    cues.prompts.push_back(std::move(prompts));
  }
  return cues;
}

LocalCueSet BuildLocalCues(const FeatureGrid& features, const Mask& mask,
                           const LocalCueOptions& options, RegionPartition* partition_out) {
  features.Validate();
  if (IsEmpty(mask)) {
    LocalCueSet cues;
    cues.skipped = true;
    return cues;
  }
  const Mask grid_mask = DownsampleMask(mask, features.h, features.w);
  const MaskGraph graph = BuildMaskGraph(features, grid_mask);
  const int k = std::min<int>(options.groups, static_cast<int>(graph.nodes.size()));
  RegionPartition partition = MstPartition(graph, k);
  const auto centers = RegionCenters(partition);
  LocalCueSet cues = ExtractLocalCues(features, mask, partition, centers, options.tau_p);
  if (partition_out != nullptr) *partition_out = std::move(partition);
  return cues;
}

LocalCueSet BuildLocalCues(const Frame& frame, const Mask& mask, const LocalCueOptions& options,
                           RegionPartition* partition_out) {
  if (!frame.same_shape(mask)) {
    throw Error(ErrorCode::kDimensionMismatch, "frame and mask differ in size");
  }
  return BuildLocalCues(ComputeColorFeatures(frame, options.cell_size), mask, options,
                        partition_out);
}

nlohmann::json ToJson(const LocalCueSet& cues) {
  nlohmann::json descriptors = nlohmann::json::array();
  for (const auto& d : cues.descriptors) {
    descriptors.push_back({{"mean_feature", d.mean_feature},
                           {"area_fraction", d.area_fraction},
                           {"centroid", {d.centroid_x, d.centroid_y}}});
  }
  nlohmann::json prompts = nlohmann::json::array();
  for (const auto& set : cues.prompts) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : set) points.push_back({{"x", p.x}, {"y", p.y}, {"positive", p.positive}});
    prompts.push_back(points);
  }
  nlohmann::json centers = nlohmann::json::array();
  for (const auto& c : cues.centers) centers.push_back({c.row, c.col});
  return {{"skipped", cues.skipped},
          {"mask_area_fraction", cues.mask_area_fraction},
          {"descriptors", descriptors},
          {"grid_centers", centers},
          {"prompts", prompts}};
}

}  // namespace cutvos
