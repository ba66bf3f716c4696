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

#include "covtrack/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace covtrack {

GroundTruth::GroundTruth(std::vector<GroundTruthEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!(e.hx > 0.0) || !(e.hy > 0.0)) {
      throw ContractError("GroundTruth: half-extents must be positive");
    }
    if (i > 0 && entries_[i - 1].frame >= e.frame) {
      throw ContractError("GroundTruth: frame indices must be strictly increasing");
    }
  }
}

const GroundTruthEntry* GroundTruth::find(int frame) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), frame,
      [](const GroundTruthEntry& e, int f) { return e.frame < f; });
  if (it == entries_.end() || it->frame != frame) return nullptr;
  return &*it;
}

double gamma_error(double ex, double ey, double hx, double hy) {
  if (!(hx > 0.0) || !(hy > 0.0)) {
    throw ContractError("gamma_error: normalizers must be positive");
  }
  if (ex < 0.0 || ey < 0.0) throw ContractError("gamma_error: errors must be nonnegative");
  return 0.5 * (ex / hx + ey / hy);
}

Metrics score(std::span<const TrackRow> track, const GroundTruth& gt) {
  Metrics m;
  m.frames_scored = 0;
  m.frames_on_track = 0;
  double sq_sum = 0.0;
  for (const TrackRow& row : track) {
    const GroundTruthEntry* entry = gt.find(row.frame);
    if (entry == nullptr) continue;
    const double ex = std::abs(entry->gx - row.state.x);
    const double ey = std::abs(entry->gy - row.state.y);
    const double gamma = gamma_error(ex, ey, entry->hx, entry->hy);
    m.scored_frames.push_back(row.frame);
    m.per_frame_gamma.push_back(gamma);
    ++m.frames_scored;
    if (gamma <= 1.0) {
      ++m.frames_on_track;
      const double nx = ex / entry->hx;
      const double ny = ey / entry->hy;
      sq_sum += 0.5 * (nx * nx + ny * ny);
    }
  }
  if (m.frames_scored == 0) {
    throw ContractError("score: track and ground truth share no frames");
  }
  m.on_track_ratio = static_cast<double>(m.frames_on_track) / m.frames_scored;
  m.on_track_rms =
      m.frames_on_track > 0 ? std::sqrt(sq_sum / m.frames_on_track) : 0.0;
  return m;
}

}  // namespace covtrack
