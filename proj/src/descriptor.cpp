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

#include "covtrack/descriptor.hpp"

#include <algorithm>
#include <cmath>

namespace covtrack {

void DescriptorConfig::validate() const {
  if (patch_side < 8) throw ContractError("DescriptorConfig: patch_side must be >= 8");
  if (!(regularization_eps >= 0.0)) {
    throw ContractError("DescriptorConfig: regularization_eps must be nonnegative");
  }
}

Patch::Patch(int side, std::vector<double> pixels) : side_(side), pixels_(std::move(pixels)) {
  if (side_ < 1) throw ContractError("Patch: side must be positive");
  if (pixels_.size() != static_cast<std::size_t>(side_) * side_) {
    throw ContractError("Patch: pixel count does not match side");
  }
  for (const double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ContractError("Patch: intensities must be in [0, 1]");
  }
}

Patch warp_patch(const GrayImage& img, const KineticState& pose,
                 const TargetExtent& extent, const DescriptorConfig& cfg) {
  cfg.validate();
  if (!(pose.h > 0.0)) throw ContractError("warp_patch: scale must be positive");
  if (!(extent.width > 0.0) || !(extent.height > 0.0)) {
    throw ContractError("warp_patch: target extent must be positive");
  }

  const double half_w = 0.5 * extent.width * pose.h;
  const double half_h = 0.5 * extent.height * pose.h;
  const double cos_t = std::cos(pose.theta);
  const double sin_t = std::sin(pose.theta);

  // Rotated bounding box of the region; no overlap with the frame at all
  // means there is nothing to sample.
  const double reach_x = std::abs(cos_t) * half_w + std::abs(sin_t) * half_h;
  const double reach_y = std::abs(sin_t) * half_w + std::abs(cos_t) * half_h;
  if (pose.x + reach_x < 0.0 || pose.x - reach_x > img.width() - 1.0 ||
      pose.y + reach_y < 0.0 || pose.y - reach_y > img.height() - 1.0) {
    throw OutOfViewError("warp_patch: region does not overlap the image");
  }

  const int side = cfg.patch_side;
  const double step_x = extent.width * pose.h / side;
  const double step_y = extent.height * pose.h / side;
  const double center = 0.5 * (side - 1);

  std::vector<double> pixels(static_cast<std::size_t>(side) * side);
  for (int py = 0; py < side; ++py) {
    const double v = (py - center) * step_y;
    for (int px = 0; px < side; ++px) {
      const double u = (px - center) * step_x;
      const double sx = pose.x + u * cos_t - v * sin_t;
      const double sy = pose.y + u * sin_t + v * cos_t;
      pixels[static_cast<std::size_t>(py) * side + px] = img.sample_clamped(sx, sy);
    }
  }
  return Patch(side, std::move(pixels));
}

FeatureField extract_features(const Patch& patch) {
  const int side = patch.side();
  FeatureField field;
  field.side = side;
  field.features.resize(static_cast<std::size_t>(side) * side);

  const auto clamp_idx = [side](int i) { return std::clamp(i, 0, side - 1); };
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double left = patch.at(clamp_idx(x - 1), y);
      const double right = patch.at(clamp_idx(x + 1), y);
      const double up = patch.at(x, clamp_idx(y - 1));
      const double down = patch.at(x, clamp_idx(y + 1));
      const double value = patch.at(x, y);

      const double gx = std::abs(0.5 * (right - left));
      const double gy = std::abs(0.5 * (down - up));
      const double gxx = std::abs(right - 2.0 * value + left);
      const double gyy = std::abs(down - 2.0 * value + up);

      auto& f = field.features[static_cast<std::size_t>(y) * side + x];
      f[kFeatX] = x + 1;
      f[kFeatY] = y + 1;
      f[kFeatIntensity] = value;
      f[kFeatGradX] = gx;
      f[kFeatGradY] = gy;
      f[kFeatGradMag] = std::sqrt(gx * gx + gy * gy);
      f[kFeatGradAngle] = std::atan2(gx, gy);  // 0/0 -> 0 by atan2 convention
      f[kFeatGradXX] = gxx;
      f[kFeatGradYY] = gyy;
    }
  }
  return field;
}

SymMatrix covariance_raw(const FeatureField& field) {
  const std::size_t n = field.features.size();
  if (n < 2) throw ContractError("covariance_raw: need at least 2 samples");

  Eigen::Matrix<double, kFeatureDim, Eigen::Dynamic> samples(kFeatureDim,
                                                             static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < kFeatureDim; ++k) {
      samples(k, static_cast<Eigen::Index>(i)) = field.features[i][k];
    }
  }
  const Eigen::Matrix<double, kFeatureDim, 1> mean = samples.rowwise().mean();
  samples.colwise() -= mean;
  Eigen::MatrixXd cov =
      samples * samples.transpose() / static_cast<double>(n - 1);
  return SymMatrix(std::move(cov));
}

SpdMatrix covariance(const FeatureField& field, const DescriptorConfig& cfg) {
  cfg.validate();
  const SymMatrix raw = covariance_raw(field);
  if (cfg.regularization_eps == 0.0) return SpdMatrix(raw);
  const double ridge =
      cfg.regularization_eps * (raw.mat().trace() / kFeatureDim + 1.0);
  return SpdMatrix(SymMatrix(
      raw.mat() + ridge * Eigen::MatrixXd::Identity(kFeatureDim, kFeatureDim)));
}

SpdMatrix descriptor_from_state(const GrayImage& img, const KineticState& pose,
                                const TargetExtent& extent, const DescriptorConfig& cfg) {
  return covariance(extract_features(warp_patch(img, pose, extent, cfg)), cfg);
}

}  // namespace covtrack
