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

// Subcommand interface.

#ifndef CUTVOS_CLI_COMMANDS_HPP_
#define CUTVOS_CLI_COMMANDS_HPP_

#include <CLI11.hpp>

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "run.hpp"

namespace cutvos::cli {

/// Bad invocation detected after parsing; exits with the usage code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  GlobalOptions global;
  RunManifest manifest;
  std::mutex mutex;

  /// Records a report file written under the output directory.
  void AddOutput(const std::string& relative) {
    std::lock_guard lock(mutex);
    manifest.outputs.push_back(relative);
  }
};

class Command {
 public:
  virtual ~Command() = default;
  virtual const char* name() const = 0;
  virtual const char* description() const = 0;
  virtual bool deterministic() const { return true; }

  /// Adds positional arguments and flags to `app`.
  virtual void Register(CLI::App* app) = 0;

  /// Resolves the configuration layers into `ctx.manifest`.
  virtual void Configure(const nlohmann::json& file_section, Context& ctx);

  /// Runs with the resolved configuration; returns the machine-readable report.
  virtual nlohmann::json Run(Context& ctx) = 0;

  std::string root;

 protected:
  ParamSet params_;
};

std::vector<std::unique_ptr<Command>> MakeCommands();

}  // namespace cutvos::cli

#endif  // CUTVOS_CLI_COMMANDS_HPP_
