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

#ifndef CUTVOS_IMAGE_HPP_
#define CUTVOS_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cutvos {

/// Dense row-major 8-bit image with a compile-time channel count.
///
/// Frames are `Image<3>` (interleaved RGB); masks are `Image<1>` holding
/// object labels with 0 meaning background.
template <int Channels>
class Image {
 public:
  static_assert(Channels > 0);
  static constexpr int kChannels = Channels;

  Image() = default;
  Image(int height, int width, std::uint8_t fill = 0)
      : height_(height),
        width_(width),
        data_(static_cast<std::size_t>(height) * width * Channels, fill) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }

  std::uint8_t& at(int row, int col, int channel = 0) {
    return data_[Offset(row, col) + channel];
  }
  std::uint8_t at(int row, int col, int channel = 0) const {
    return data_[Offset(row, col) + channel];
  }

  std::span<std::uint8_t> pixel(int row, int col) {
    return {data_.data() + Offset(row, col), static_cast<std::size_t>(Channels)};
  }
  std::span<const std::uint8_t> pixel(int row, int col) const {
    return {data_.data() + Offset(row, col), static_cast<std::size_t>(Channels)};
  }

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  bool same_shape(int height, int width) const noexcept {
    return height_ == height && width_ == width;
  }
  template <int Other>
  bool same_shape(const Image<Other>& other) const noexcept {
    return same_shape(other.height(), other.width());
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t Offset(int row, int col) const noexcept {
    return (static_cast<std::size_t>(row) * width_ + col) * Channels;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

using Frame = Image<3>;
using Mask = Image<1>;

/// Number of nonzero pixels.
inline std::size_t CountForeground(const Mask& mask) {
  std::size_t n = 0;
  for (auto v : mask.data()) n += (v != 0);
  return n;
}

inline bool IsEmpty(const Mask& mask) { return CountForeground(mask) == 0; }

}  // namespace cutvos

#endif  // CUTVOS_IMAGE_HPP_
