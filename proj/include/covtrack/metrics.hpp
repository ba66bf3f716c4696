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

#include <span>
#include <vector>

#include "covtrack/errors.hpp"
#include "covtrack/state.hpp"

namespace covtrack {

// One annotated frame: target center and half-extent normalizers, pixels.
struct GroundTruthEntry {
  int frame;
  double gx;
  double gy;
  double hx;
  double hy;
};

// Frames are strictly increasing; gaps mean the target was out of view and
// those frames are simply not scored.
class GroundTruth {
 public:
  explicit GroundTruth(std::vector<GroundTruthEntry> entries);

  const std::vector<GroundTruthEntry>& entries() const { return entries_; }

  /// nullptr when the frame is not annotated.
  const GroundTruthEntry* find(int frame) const;

 private:
  std::vector<GroundTruthEntry> entries_;
};

// One row of a track: the per-frame pose estimate plus the effective
// sample size diagnostic.
struct TrackRow {
  int frame;
  KineticState state;
  double ess;
};

struct Metrics {
  double on_track_ratio;  // on-track frames / scored frames
  double on_track_rms;    // normalized RMS error over on-track frames
  std::vector<int> scored_frames;
  std::vector<double> per_frame_gamma;  // aligned with scored_frames
  int frames_scored;
  int frames_on_track;
};

/// Normalized center error (e_x/H_x + e_y/H_y) / 2; a frame is on-track
/// when gamma <= 1.
double gamma_error(double ex, double ey, double hx, double hy);

/// Scores a track against ground truth. Frames present in only one of the
/// two are excluded; an empty overlap is a contract error.
Metrics score(std::span<const TrackRow> track, const GroundTruth& gt);

}  // namespace covtrack
