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

#include <cstdint>
#include <vector>

#include "covtrack/image.hpp"
#include "covtrack/metrics.hpp"
#include "covtrack/state.hpp"

namespace covtrack {

// One leg of the scripted trajectory: per-frame velocity, rotation rate
// (radians/frame) and additive scale rate.
struct TrajectorySegment {
  int frames;
  double vx = 0.0;
  double vy = 0.0;
  double rot_rate = 0.0;
  double scale_rate = 0.0;
};

// Textured target moving over a textured background, rendered with
// subpixel bilinear placement. Everything is a pure function of the
// scenario, so sequences are reproducible bit for bit.
struct SynthScenario {
  int width = 320;
  int height = 240;
  int target_w = 48;
  int target_h = 48;
  std::uint64_t texture_seed = 7;
  double start_x = -1.0;  // < 0 places the target at the image center
  double start_y = -1.0;
  double start_h = 1.0;
  double start_theta = 0.0;
  std::vector<TrajectorySegment> segments;
  int switch_frame = -1;  // swap the target texture from this frame on
  double pixel_noise_sigma = 0.0;
  double margin = 8.0;  // minimum clearance of the target box to the frame edge
};

struct SynthSequence {
  std::vector<GrayImage> frames;
  GroundTruth gt;
  std::vector<KineticState> poses;  // exact pose per frame, velocities included
};

/// Renders the scenario; throws ContractError if the trajectory violates
/// the margin at any frame.
SynthSequence synth_sequence(const SynthScenario& sc);

/// Seeded two-octave value-noise texture with intensities in [lo, hi].
GrayImage make_texture(std::uint64_t seed, int width, int height, double lo, double hi,
                       double cell_size);

}  // namespace covtrack
