// Copyright 2026 The covtrack Authors
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

#include <CLI11.hpp>
#include <optional>
#include <string>

#include "commands.hpp"

namespace {

// Shared flags override the corresponding config keys.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool overlay = false;
};

covtrack::RunConfig load_config(const CommonFlags& flags) {
  covtrack::RunConfig cfg = covtrack::RunConfig::from_file(flags.config_path);
  if (flags.seed) {
    cfg.filter_seed = *flags.seed;
    cfg.synth.texture_seed = *flags.seed;
  }
  if (flags.out_dir) cfg.output_dir = *flags.out_dir;
  if (flags.overlay) cfg.output_overlay = true;
  return cfg;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_overlay) {
  cmd->add_option("--config", flags.config_path, "run configuration file")->required();
  cmd->add_option("--seed", flags.seed, "override the configured seed");
  cmd->add_option("--out", flags.out_dir, "override the output directory");
  if (with_overlay) cmd->add_flag("--overlay", flags.overlay, "write overlay frames");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariance-descriptor particle tracking"};
  app.require_subcommand(1);

  CommonFlags track_flags, synth_flags, mds_flags;
  std::string eval_track, eval_gt;

  CLI::App* track = app.add_subcommand("track", "track a frame sequence");
  add_common_flags(track, track_flags, /*with_overlay=*/true);

  CLI::App* eval = app.add_subcommand("eval", "score a track CSV against ground truth");
  eval->add_option("track_csv", eval_track, "track CSV path")->required();
  eval->add_option("gt_csv", eval_gt, "ground-truth CSV path")->required();

  CLI::App* synth = app.add_subcommand("synth", "render a synthetic sequence");
  add_common_flags(synth, synth_flags, /*with_overlay=*/false);

  CLI::App* mds = app.add_subcommand("mds", "embed patch descriptors with classical MDS");
  add_common_flags(mds, mds_flags, /*with_overlay=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? covtrack::cli::kExitOk : covtrack::cli::kExitConfig;
  }

  try {
    if (track->parsed()) return covtrack::cli::cmd_track(load_config(track_flags));
    if (eval->parsed()) return covtrack::cli::cmd_eval(eval_track, eval_gt);
    if (synth->parsed()) return covtrack::cli::cmd_synth(load_config(synth_flags));
    if (mds->parsed()) return covtrack::cli::cmd_mds(load_config(mds_flags));
  } catch (...) {
    return covtrack::cli::report_error_and_exit_code();
  }
  return covtrack::cli::kExitConfig;
}
