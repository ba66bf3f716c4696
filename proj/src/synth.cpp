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

#include "covtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "covtrack/rng.hpp"

namespace covtrack {
namespace {

constexpr std::uint64_t kBackgroundSalt = 0xb6;
constexpr std::uint64_t kSwitchSalt = 0x51;
constexpr std::uint64_t kPixelNoiseSalt = 0x9d;

// Value noise: uniform lattice values, bilinear interpolation between them.
class ValueNoise {
 public:
  ValueNoise(std::uint64_t seed, int width, int height, double cell_size)
      : cell_(cell_size),
        cols_(static_cast<int>(width / cell_size) + 2),
        rows_(static_cast<int>(height / cell_size) + 2),
        lattice_(static_cast<std::size_t>(cols_) * rows_) {
    for (int j = 0; j < rows_; ++j) {
      for (int i = 0; i < cols_; ++i) {
        CounterRng rng(seed, derive_stream({static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(j)}));
        lattice_[static_cast<std::size_t>(j) * cols_ + i] = rng.uniform();
      }
    }
  }

  double sample(double x, double y) const {
    const double gx = x / cell_;
    const double gy = y / cell_;
    const int i = std::clamp(static_cast<int>(gx), 0, cols_ - 2);
    const int j = std::clamp(static_cast<int>(gy), 0, rows_ - 2);
    const double fx = std::clamp(gx - i, 0.0, 1.0);
    const double fy = std::clamp(gy - j, 0.0, 1.0);
    const auto at = [this](int a, int b) {
      return lattice_[static_cast<std::size_t>(b) * cols_ + a];
    };
    return at(i, j) * (1 - fx) * (1 - fy) + at(i + 1, j) * fx * (1 - fy) +
           at(i, j + 1) * (1 - fx) * fy + at(i + 1, j + 1) * fx * fy;
  }

 private:
  double cell_;
  int cols_;
  int rows_;
  std::vector<double> lattice_;
};

}  // namespace

GrayImage make_texture(std::uint64_t seed, int width, int height, double lo, double hi,
                       double cell_size) {
  const ValueNoise coarse(derive_stream({seed, 0}), width, height, cell_size);
  const ValueNoise fine(derive_stream({seed, 1}), width, height, cell_size * 0.41);
  std::vector<double> pixels(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double t = 0.65 * coarse.sample(x, y) + 0.35 * fine.sample(x, y);
      pixels[static_cast<std::size_t>(y) * width + x] = lo + (hi - lo) * t;
    }
  }
  return GrayImage(width, height, std::move(pixels));
}

SynthSequence synth_sequence(const SynthScenario& sc) {
  if (sc.width < 16 || sc.height < 16 || sc.target_w < 4 || sc.target_h < 4) {
    throw ContractError("synth_sequence: scene or target too small");
  }
  if (!(sc.start_h > 0.0)) throw ContractError("synth_sequence: start_h must be positive");

  int frame_count = 1;
  for (const auto& seg : sc.segments) {
    if (seg.frames < 0) throw ContractError("synth_sequence: negative segment length");
    frame_count += seg.frames;
  }

  const GrayImage background =
      make_texture(derive_stream({sc.texture_seed, kBackgroundSalt}), sc.width, sc.height,
                   0.30, 0.70, 9.0);
  const GrayImage target_a =
      make_texture(sc.texture_seed, sc.target_w, sc.target_h, 0.05, 0.95, 4.5);
  const GrayImage target_b =
      make_texture(derive_stream({sc.texture_seed, kSwitchSalt}), sc.target_w, sc.target_h,
                   0.05, 0.95, 3.2);

  // Walk the scripted trajectory first so a bad scenario fails before any
  // rendering happens.
  std::vector<KineticState> poses;
  poses.reserve(frame_count);
  KineticState pose;
  pose.x = sc.start_x < 0.0 ? 0.5 * (sc.width - 1) : sc.start_x;
  pose.y = sc.start_y < 0.0 ? 0.5 * (sc.height - 1) : sc.start_y;
  pose.h = sc.start_h;
  pose.theta = sc.start_theta;
  std::size_t seg_index = 0;
  int left_in_segment = sc.segments.empty() ? 0 : sc.segments[0].frames;
  for (int t = 0; t < frame_count; ++t) {
    while (seg_index < sc.segments.size() && left_in_segment == 0) {
      ++seg_index;
      left_in_segment = seg_index < sc.segments.size() ? sc.segments[seg_index].frames : 0;
    }
    const TrajectorySegment active = seg_index < sc.segments.size()
                                         ? sc.segments[seg_index]
                                         : TrajectorySegment{0};
    pose.vx = active.vx;
    pose.vy = active.vy;

    const double half_w = 0.5 * sc.target_w * pose.h;
    const double half_h = 0.5 * sc.target_h * pose.h;
    const double reach_x = std::abs(std::cos(pose.theta)) * half_w +
                           std::abs(std::sin(pose.theta)) * half_h;
    const double reach_y = std::abs(std::sin(pose.theta)) * half_w +
                           std::abs(std::cos(pose.theta)) * half_h;
    if (pose.x - reach_x < sc.margin || pose.x + reach_x > sc.width - 1 - sc.margin ||
        pose.y - reach_y < sc.margin || pose.y + reach_y > sc.height - 1 - sc.margin) {
      std::ostringstream msg;
      msg << "synth_sequence: trajectory leaves the margin at frame " << t;
      throw ContractError(msg.str());
    }
    poses.push_back(pose);

    if (t + 1 < frame_count) {
      pose.x += active.vx;
      pose.y += active.vy;
      pose.theta += active.rot_rate;
      pose.h += active.scale_rate;
      if (!(pose.h > 0.0)) throw ContractError("synth_sequence: scale collapsed");
      if (left_in_segment > 0) --left_in_segment;
    }
  }

  std::vector<GrayImage> frames;
  frames.reserve(frame_count);
  std::vector<GroundTruthEntry> gt_entries;
  gt_entries.reserve(frame_count);

  const double tex_cx = 0.5 * (sc.target_w - 1);
  const double tex_cy = 0.5 * (sc.target_h - 1);
  for (int t = 0; t < frame_count; ++t) {
    const KineticState& p = poses[t];
    const GrayImage& target =
        (sc.switch_frame >= 0 && t >= sc.switch_frame) ? target_b : target_a;
    std::vector<double> pixels = background.pixels();

    const double cos_t = std::cos(p.theta);
    const double sin_t = std::sin(p.theta);
    const double half_w = 0.5 * sc.target_w * p.h;
    const double half_h = 0.5 * sc.target_h * p.h;
    const double reach_x = std::abs(cos_t) * half_w + std::abs(sin_t) * half_h;
    const double reach_y = std::abs(sin_t) * half_w + std::abs(cos_t) * half_h;
    const int x_lo = std::max(0, static_cast<int>(std::floor(p.x - reach_x)));
    const int x_hi = std::min(sc.width - 1, static_cast<int>(std::ceil(p.x + reach_x)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(p.y - reach_y)));
    const int y_hi = std::min(sc.height - 1, static_cast<int>(std::ceil(p.y + reach_y)));

    for (int y = y_lo; y <= y_hi; ++y) {
      for (int x = x_lo; x <= x_hi; ++x) {
        // Inverse similarity: frame pixel -> target-local coordinates.
        const double dx = (x - p.x) / p.h;
        const double dy = (y - p.y) / p.h;
        const double u = cos_t * dx + sin_t * dy;
        const double v = -sin_t * dx + cos_t * dy;
        if (std::abs(u) > 0.5 * sc.target_w || std::abs(v) > 0.5 * sc.target_h) continue;
        pixels[static_cast<std::size_t>(y) * sc.width + x] =
            target.sample_clamped(u + tex_cx, v + tex_cy);
      }
    }

    if (sc.pixel_noise_sigma > 0.0) {
      CounterRng noise(derive_stream({sc.texture_seed, kPixelNoiseSalt}),
                       static_cast<std::uint64_t>(t));
      for (double& v : pixels) {
        v = std::clamp(v + sc.pixel_noise_sigma * noise.normal(), 0.0, 1.0);
      }
    }

    frames.emplace_back(sc.width, sc.height, std::move(pixels));
    gt_entries.push_back(GroundTruthEntry{t, p.x, p.y, 0.5 * sc.target_w * p.h,
                                          0.5 * sc.target_h * p.h});
  }

  return SynthSequence{std::move(frames), GroundTruth(std::move(gt_entries)),
                       std::move(poses)};
}

}  // namespace covtrack
