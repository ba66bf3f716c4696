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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "covtrack/synth.hpp"
#include "covtrack/tracker.hpp"

namespace covtrack {

// Flat key=value run configuration with sectioned prefixes
// (`filter.n_particles=200`). Every key has a default except the input
// location and the initial pose; unknown keys are rejected.
struct RunConfig {
  // input.*
  std::string input_frames;  // directory of .pgm/.png frames, or printf pattern
  int input_frame_start = 0;
  int input_frame_count = -1;  // -1: all files in directory mode
  std::optional<KineticState> input_init;
  std::optional<TargetExtent> input_extent;

  // filter.* / motion.* / descriptor.*
  int filter_n_particles = 200;
  double filter_obs_sigma = 0.4;
  double filter_template_sigma = 0.02;
  double filter_resample_ess_frac = 0.5;
  std::uint64_t filter_seed = 1;
  int filter_threads = 0;
  std::array<double, 6> motion_noise_small{1.0, 1.0, 0.5, 0.5, 0.01, 0.02};
  std::array<double, 6> motion_noise_large{4.0, 4.0, 2.0, 2.0, 0.05, 0.2};
  std::array<double, 2> motion_jump_prob{0.9, 0.1};
  int descriptor_patch_side = 32;
  double descriptor_regularization_eps = 1e-5;

  // output.*
  std::string output_dir = ".";
  std::string output_track_csv = "track.csv";
  std::string output_checkpoint = "checkpoint.txt";
  bool output_overlay = false;
  std::string output_overlay_dir = "overlay";
  int output_overlay_particles = 0;

  // synth.*
  SynthScenario synth;
  std::string synth_frame_prefix = "frame_";
  std::string synth_gt_csv = "gt.csv";

  // mds.*
  std::string mds_patches;
  std::optional<TargetExtent> mds_extent;
  int mds_dim = 2;
  std::string mds_out = "mds.csv";

  static RunConfig from_string(const std::string& text);
  static RunConfig from_file(const std::filesystem::path& path);

  /// Effective configuration as key=value lines (defaults included), the
  /// form echoed into checkpoints.
  std::vector<std::string> echo_lines() const;

  FilterConfig to_filter_config() const;

  /// Frame paths resolved from `input.frames`; directory mode lists
  /// *.pgm/*.png sorted by name.
  std::vector<std::filesystem::path> resolve_frames() const;
};

}  // namespace covtrack
