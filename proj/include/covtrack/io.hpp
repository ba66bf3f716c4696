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
#include <string>
#include <vector>

#include "covtrack/metrics.hpp"
#include "covtrack/tracker.hpp"

namespace covtrack {

// Track CSV: header `frame,x,y,vx,vy,h,theta,ess`, values at 17
// significant digits so runs compare byte for byte.
std::string encode_track_csv(std::span<const TrackRow> rows);
std::vector<TrackRow> parse_track_csv(const std::string& text);
void write_track_csv(const std::filesystem::path& path, std::span<const TrackRow> rows);
std::vector<TrackRow> read_track_csv(const std::filesystem::path& path);

// Ground-truth CSV: header `frame,gx,gy,Hx,Hy`.
std::string encode_gt_csv(const GroundTruth& gt);
GroundTruth parse_gt_csv(const std::string& text);
void write_gt_csv(const std::filesystem::path& path, const GroundTruth& gt);
GroundTruth read_gt_csv(const std::filesystem::path& path);

/// Flat key=value metrics report.
std::string format_metrics_report(const Metrics& metrics);

// MDS embedding CSV: header `index,label,c1..cdim`.
std::string encode_mds_csv(std::span<const std::string> labels, const Eigen::MatrixXd& coords);

// Filter checkpoint: config echo plus every particle's state and template
// in the matrix text format. Supports resume and forensic inspection.
struct Checkpoint {
  std::vector<std::string> config_lines;
  TargetExtent extent;
  int frame_index;
  TrackRow estimate_row;     // last estimate pose + ess
  Eigen::MatrixXd estimate_template;
  std::vector<Particle> particles;
};

std::string encode_checkpoint(const FilterState& filter,
                              std::span<const std::string> config_lines);
Checkpoint parse_checkpoint(const std::string& text);
void write_checkpoint(const std::filesystem::path& path, const FilterState& filter,
                      std::span<const std::string> config_lines);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Checkpoint + config -> live filter.
FilterState restore_filter(const Checkpoint& cp, FilterConfig cfg);

}  // namespace covtrack
