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

#ifndef CUTVOS_RNG_HPP_
#define CUTVOS_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace cutvos {

/// Seeded generator whose draw sequence is identical on every platform.
///
/// The engine is `std::mt19937_64`, whose output sequence is fixed by the
/// C++ standard. Real-valued draws do not go through `<random>`
/// distributions (those are implementation-defined); a double in [0, 1) is
/// built from the top 53 bits of one engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t NextU64() { return engine_(); }

  /// Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  /// Uniform index in [0, n). `n` must be positive.
  std::size_t Index(std::size_t n) {
    auto i = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// Derives an independent stream seed for item `index` of a batch run with
  /// `master`: splitmix64(master ^ splitmix64(index + 1)).
  static std::uint64_t Split(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace cutvos

#endif  // CUTVOS_RNG_HPP_
