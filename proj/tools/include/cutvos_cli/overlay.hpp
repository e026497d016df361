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

// Mask overlay rendering with a fixed object palette.

#ifndef CUTVOS_CLI_OVERLAY_HPP_
#define CUTVOS_CLI_OVERLAY_HPP_

#include "cutvos/image.hpp"
#include "cutvos/image_io.hpp"

namespace cutvos::cli {

/// Twelve object colours; label l uses entry (l - 1) % 12.
const io::Palette& OverlayPalette();

/// Blends the palette colour of every labelled pixel over `frame`:
/// out = round((1 - alpha) * frame + alpha * colour). Unlabelled pixels are
/// copied. Throws DimensionMismatch or InvalidArgument (alpha outside [0, 1]).
Frame RenderOverlay(const Frame& frame, const Mask& labels, double alpha);

}  // namespace cutvos::cli

#endif  // CUTVOS_CLI_OVERLAY_HPP_
