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

#ifndef CUTVOS_IMAGE_IO_HPP_
#define CUTVOS_IMAGE_IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cutvos/image.hpp"

namespace cutvos::io {

using Palette = std::vector<std::array<std::uint8_t, 3>>;

/// The DAVIS colour palette (256 entries, bit-interleaved label colours).
const Palette& DavisPalette();

/// Reads a JPEG or PNG as RGB. Gray and palette PNGs are expanded.
Frame ReadFrame(const std::filesystem::path& path);

/// Reads a label image. Palette PNGs yield raw palette indices; 8-bit
/// grayscale PNGs yield the gray value. Anything else is a ParseError.
Mask ReadLabelPng(const std::filesystem::path& path);

void WriteFramePng(const std::filesystem::path& path, const Frame& frame);
void WriteFrameJpeg(const std::filesystem::path& path, const Frame& frame,
                    int quality = 95);
/// Dispatches on the extension (.png, .jpg/.jpeg).
void WriteFrame(const std::filesystem::path& path, const Frame& frame);

/// Writes a palette-indexed PNG whose indices are the mask labels.
void WriteLabelPng(const std::filesystem::path& path, const Mask& mask,
                   const Palette& palette = DavisPalette());

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);
std::string ReadFile(const std::filesystem::path& path);

/// Regular files in `dir` with one of `extensions` (lower-case, with dot),
/// sorted lexicographically by filename.
std::vector<std::filesystem::path> ListImages(
    const std::filesystem::path& dir, const std::vector<std::string>& extensions);

/// Zero-padded five-digit frame name, e.g. `FrameName(7, ".png")` is
/// "00007.png".
std::string FrameName(int index, const std::string& extension);

}  // namespace cutvos::io

#endif  // CUTVOS_IMAGE_IO_HPP_
