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

#ifndef CUTVOS_ERROR_HPP_
#define CUTVOS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cutvos {

/// Stable error codes. The names returned by `ErrorCodeName` are part of the
/// CLI contract and must not change.
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kParseError,
  kInvalidConfig,
  // dataset
  kMissingFrame,
  kDimensionMismatch,
  kEmptyTrack,
  kGapOrOverlap,
  kUnknownTransitionType,
  kOutOfRangeIndex,
  kZeroDuration,
  // imgops
  kNonFiniteParams,
  kInvalidHorizon,
  // tma
  kDonorUnavailable,
  kIncompatibleDonorSize,
  kTimelineTooShort,
  // metrics
  kEmptyShotList,
  kMissingTypeLabel,
  // shotdetect
  kEmptyWindow,
  kOutOfRange,
  // localcues
  kEmptyMask,
  kKTooLarge,
  // harness
  kContractViolation,
  kMissingOracleMask,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return ErrorCodeName(code_); }

 private:
  ErrorCode code_;
};

}  // namespace cutvos

#endif  // CUTVOS_ERROR_HPP_
