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

#include "cutvos_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "cutvos/error.hpp"
#include "cutvos/image_io.hpp"

namespace cutvos::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int Fail(int code, const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return code;
}

int Replay(const fs::path& manifest_path, const GlobalOptions& global, bool out_given) {
  json j;
  try {
    j = json::parse(io::ReadFile(manifest_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, manifest_path.string() + ": " + e.what());
  }
  const RunManifest m = RunManifest::FromJson(j);
  std::vector<std::string> args = {m.command,
                                   m.inputs.at("root").get<std::string>(),
                                   "--config",
                                   fs::absolute(manifest_path).string(),
                                   "--out",
                                   (out_given ? global.out : m.out_dir).string(),
                                   "--jobs",
                                   std::to_string(global.jobs > 1 ? global.jobs : m.jobs)};
  for (const auto& v : m.videos) {
    args.push_back("--video");
    args.push_back(v);
  }
  if (global.json) args.push_back("--json");
  return Dispatch(args);
}

}  // namespace

int Dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Multi-shot video object segmentation toolkit", "cutvos"};
  app.set_version_flag("--version", CUTVOS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_flag("--json", global.json, "Print the machine-readable report on stdout");
  app.add_option("--jobs", global.jobs, "Videos processed in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::Option* out_opt =
      app.add_option("--out", global.out, "Output directory")->capture_default_str();
  app.add_option("--video", global.videos, "Restrict to these video ids (repeatable)");
  app.add_option("--config", global.config_file, "JSON config file");

  auto commands = MakeCommands();
  std::vector<CLI::App*> subs;
  for (auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd->name(), cmd->description());
    cmd->Register(sub);
    subs.push_back(sub);
  }
  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a command from its manifest.json");
  replay->add_option("manifest", manifest_path, "Manifest written by an earlier run")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (replay->parsed()) return Replay(manifest_path, global, out_opt->count() > 0);

    Command* cmd = nullptr;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (subs[i]->parsed()) cmd = commands[i].get();
    }
    const auto start = std::chrono::steady_clock::now();
    Context ctx;
    ctx.global = global;
    ctx.manifest.command = cmd->name();
    ctx.manifest.out_dir = global.out;
    ctx.manifest.videos = global.videos;
    ctx.manifest.jobs = global.jobs;
    ctx.manifest.inputs = {{"root", fs::absolute(cmd->root).lexically_normal().string()}};
    cmd->Configure(LoadConfigSection(global.config_file, cmd->name()), ctx);
    fs::create_directories(global.out);
    const json report = cmd->Run(ctx);

    ctx.manifest.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::sort(ctx.manifest.outputs.begin(), ctx.manifest.outputs.end());
    io::WriteFileAtomic(global.out / kManifestFile, ctx.manifest.ToJson().dump(2) + "\n");
    if (global.json) {
      std::cout << report.dump(2) << "\n";
    } else {
      std::cout << cmd->name() << ": wrote " << (global.out / kManifestFile).string();
      for (const auto& o : ctx.manifest.outputs) std::cout << ", " << o;
      std::cout << "\n";
    }
    return kExitOk;
  } catch (const UsageError& e) {
    return Fail(kExitUsage, e.what());
  } catch (const Error& e) {
    return Fail(kExitData, e.what());
  } catch (const json::exception& e) {
    return Fail(kExitData, std::string("ParseError: ") + e.what());
  } catch (const fs::filesystem_error& e) {
    return Fail(kExitData, std::string("IoError: ") + e.what());
  }
}

}  // namespace cutvos::cli
