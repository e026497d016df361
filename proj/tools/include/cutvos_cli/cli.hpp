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

// Command-line entry point.

#ifndef CUTVOS_CLI_CLI_HPP_
#define CUTVOS_CLI_CLI_HPP_

#include <string>
#include <vector>

namespace cutvos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Parses and runs one invocation. args excludes the program name.
/// Returns 0 on success, 1 on usage errors, 2 on data errors.
int Dispatch(const std::vector<std::string>& args);

}  // namespace cutvos::cli

#endif  // CUTVOS_CLI_CLI_HPP_
