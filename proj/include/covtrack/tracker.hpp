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
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "covtrack/descriptor.hpp"
#include "covtrack/image.hpp"
#include "covtrack/manifold.hpp"
#include "covtrack/rng.hpp"
#include "covtrack/state.hpp"

namespace covtrack {

// One joint hypothesis: pose, covariance template, importance weight.
// Weights live in log domain end to end.
struct Particle {
  KineticState state;
  SpdMatrix tmpl;
  double log_weight;
};

struct MotionConfig {
  Eigen::Matrix<double, 6, 6> transition;     // near constant velocity
  Eigen::Matrix<double, 6, 1> noise_small;    // per-component std dev
  Eigen::Matrix<double, 6, 1> noise_large;
  std::array<double, 2> jump_prob{0.9, 0.1};  // P(small), P(large)

  static MotionConfig defaults();
  void validate() const;
};

struct FilterConfig {
  int n_particles = 200;
  double obs_sigma = 0.4;
  NoiseSpec template_noise = NoiseSpec::uniform(kFeatureDim, 0.02, 1);
  double resample_ess_frac = 0.5;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = pick a small default
  MotionConfig motion = MotionConfig::defaults();
  DescriptorConfig descriptor;

  void validate() const;
};

struct Estimate {
  int frame_index;
  KineticState state;
  SpdMatrix tmpl;
  double ess;
};

/// Raised when every particle has zero weight; carries the last good
/// estimate so callers can report a partial track.
class TrackLostError : public std::runtime_error {
 public:
  TrackLostError(const std::string& what, Estimate last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const Estimate& last_estimate() const { return last_; }

 private:
  Estimate last_;
};

/// One kinematic propagation step s' = A s + u, where u is the two-level
/// Gaussian jump mixture; h is floored at 0.05 after noise.
KineticState propagate_kinetics(const KineticState& s, const MotionConfig& cfg,
                                CounterRng& rng);

/// Unnormalized log observation density -d^2 / (2 sigma^2) with d the
/// geodesic distance between hypothesized and observed descriptor.
double log_likelihood(const SpdMatrix& tmpl, const SpdMatrix& observed, double obs_sigma);

/// Posterior mean: per-component weighted means, theta via atan2 of the
/// weighted (sin, cos), template by log-Euclidean weighted mean.
std::pair<KineticState, SpdMatrix> mmse_estimate(std::span<const Particle> particles);

/// Systematic (stratified, single-uniform) resampling. `weights` must be
/// normalized; `u` is the stratum offset in [0, 1). Returns one offspring
/// index per input weight.
std::vector<std::size_t> systematic_resample(std::span<const double> weights, double u);

/// 1 / sum(w_i^2) for normalized weights.
double effective_sample_size(std::span<const double> normalized_weights);

// The joint-state particle filter: propagate kinematics and template,
// weigh against the observed descriptor, estimate, resample on ESS decay.
class FilterState {
 public:
  /// Initializes every particle at `init_state` with the descriptor of the
  /// initial region as shared template and uniform weights.
  FilterState(const GrayImage& frame0, const KineticState& init_state,
              const TargetExtent& extent, FilterConfig cfg);

  /// Advances one frame and returns the MMSE estimate for it.
  Estimate step(const GrayImage& frame);

  const std::vector<Particle>& particles() const { return particles_; }
  const FilterConfig& config() const { return cfg_; }
  const TargetExtent& extent() const { return extent_; }
  int frame_index() const { return frame_index_; }
  const Estimate& last_estimate() const { return last_estimate_; }

  /// ESS of the current particle weights.
  double current_ess() const;

  /// Rebuilds a filter mid-track (checkpoint resume).
  static FilterState restore(FilterConfig cfg, const TargetExtent& extent, int frame_index,
                             std::vector<Particle> particles, Estimate last_estimate);

 private:
  struct Restore {};
  FilterState(Restore, FilterConfig cfg, const TargetExtent& extent, int frame_index,
              std::vector<Particle> particles, Estimate last_estimate);

  FilterConfig cfg_;
  TargetExtent extent_;
  int frame_index_ = 0;
  std::vector<Particle> particles_;
  Estimate last_estimate_;
};

}  // namespace covtrack
