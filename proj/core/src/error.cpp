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

#include "cutvos/error.hpp"

namespace cutvos {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMissingFrame: return "MissingFrame";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyTrack: return "EmptyTrack";
    case ErrorCode::kGapOrOverlap: return "GapOrOverlap";
    case ErrorCode::kUnknownTransitionType: return "UnknownTransitionType";
    case ErrorCode::kOutOfRangeIndex: return "OutOfRangeIndex";
    case ErrorCode::kZeroDuration: return "ZeroDuration";
    case ErrorCode::kNonFiniteParams: return "NonFiniteParams";
    case ErrorCode::kInvalidHorizon: return "InvalidHorizon";
    case ErrorCode::kDonorUnavailable: return "DonorUnavailable";
    case ErrorCode::kIncompatibleDonorSize: return "IncompatibleDonorSize";
    case ErrorCode::kTimelineTooShort: return "TimelineTooShort";
    case ErrorCode::kEmptyShotList: return "EmptyShotList";
    case ErrorCode::kMissingTypeLabel: return "MissingTypeLabel";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kContractViolation: return "ContractViolation";
    case ErrorCode::kMissingOracleMask: return "MissingOracleMask";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace cutvos
