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

#include <array>
#include <vector>

#include "covtrack/image.hpp"
#include "covtrack/matrix.hpp"
#include "covtrack/state.hpp"

namespace covtrack {

inline constexpr int kFeatureDim = 9;

// Per-pixel feature layout of the covariance descriptor.
enum Feature : int {
  kFeatX = 0,      // patch column, 1-based
  kFeatY = 1,      // patch row, 1-based
  kFeatIntensity = 2,
  kFeatGradX = 3,  // |I_x|
  kFeatGradY = 4,  // |I_y|
  kFeatGradMag = 5,
  kFeatGradAngle = 6,  // arctan(|I_x| / |I_y|), in [0, pi/2]
  kFeatGradXX = 7,     // |I_xx|
  kFeatGradYY = 8,     // |I_yy|
};

struct DescriptorConfig {
  int patch_side = 32;
  double regularization_eps = 1e-5;

  void validate() const;
};

// Square patch of intensities in [0, 1], the standard size every region is
// warped to before feature extraction.
class Patch {
 public:
  Patch(int side, std::vector<double> pixels);

  int side() const { return side_; }
  double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * side_ + x]; }
  const std::vector<double>& pixels() const { return pixels_; }

 private:
  int side_;
  std::vector<double> pixels_;
};

// Per-pixel 9-d feature vectors over a patch, row-major.
struct FeatureField {
  int side = 0;
  std::vector<std::array<double, kFeatureDim>> features;

  const std::array<double, kFeatureDim>& at(int x, int y) const {
    return features[static_cast<std::size_t>(y) * side + x];
  }
};

/// Similarity warp (translate, rotate theta, scale h about the target
/// center) of the pose's region, resampled to patch_side^2 with bilinear
/// interpolation; samples outside the image clamp to the border.
Patch warp_patch(const GrayImage& img, const KineticState& pose,
                 const TargetExtent& extent, const DescriptorConfig& cfg);

/// 9-d features per pixel; gradients are central differences with
/// replicated borders, computed on the warped patch.
FeatureField extract_features(const Patch& patch);

/// Sample covariance of the feature field (divisor N-1), unregularized.
SymMatrix covariance_raw(const FeatureField& field);

/// Regularized covariance descriptor: raw + eps * (trace/d + 1) * I, which
/// keeps even degenerate fields strictly positive definite.
SpdMatrix covariance(const FeatureField& field, const DescriptorConfig& cfg);

/// The full measurement operator: warp, featurize, covariance.
SpdMatrix descriptor_from_state(const GrayImage& img, const KineticState& pose,
                                const TargetExtent& extent, const DescriptorConfig& cfg);

}  // namespace covtrack
