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

#include "covtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "parallel.hpp"

namespace covtrack {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinScale = 0.05;

// Stream salts so the kinematic, template, and resampling draws of one
// frame never collide.
constexpr std::uint64_t kKineticsSalt = 0x6b696e;
constexpr std::uint64_t kTemplateSalt = 0x74706c;
constexpr std::uint64_t kResampleSalt = 0x727370;

Eigen::Matrix<double, 6, 1> to_vector(const KineticState& s) {
  Eigen::Matrix<double, 6, 1> v;
  v << s.x, s.y, s.vx, s.vy, s.h, s.theta;
  return v;
}

KineticState from_vector(const Eigen::Matrix<double, 6, 1>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

bool center_in_frame(const KineticState& s, const GrayImage& frame) {
  return s.x >= 0.0 && s.x <= frame.width() - 1.0 && s.y >= 0.0 &&
         s.y <= frame.height() - 1.0;
}

// The initial region must sit fully inside the frame.
void require_region_inside(const GrayImage& frame, const KineticState& pose,
                           const TargetExtent& extent) {
  const double half_w = 0.5 * extent.width * pose.h;
  const double half_h = 0.5 * extent.height * pose.h;
  const double cos_t = std::abs(std::cos(pose.theta));
  const double sin_t = std::abs(std::sin(pose.theta));
  const double reach_x = cos_t * half_w + sin_t * half_h;
  const double reach_y = sin_t * half_w + cos_t * half_h;
  if (pose.x - reach_x < 0.0 || pose.x + reach_x > frame.width() - 1.0 ||
      pose.y - reach_y < 0.0 || pose.y + reach_y > frame.height() - 1.0) {
    throw OutOfViewError("init_tracker: initial region not fully inside the frame");
  }
}

// log(sum(exp(lw))) with the max factored out; returns the pair
// (max, log sum exp) so callers can normalize.
std::vector<double> normalized_weights(std::span<const double> log_weights) {
  const double max_lw = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> weights(log_weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    weights[i] = std::exp(log_weights[i] - max_lw);
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
  return weights;
}

}  // namespace

MotionConfig MotionConfig::defaults() {
  MotionConfig cfg;
  cfg.transition = Eigen::Matrix<double, 6, 6>::Identity();
  cfg.transition(0, 2) = 1.0;  // x += vx
  cfg.transition(1, 3) = 1.0;  // y += vy
  cfg.noise_small << 1.0, 1.0, 0.5, 0.5, 0.01, 0.02;
  cfg.noise_large << 4.0, 4.0, 2.0, 2.0, 0.05, 0.2;
  cfg.jump_prob = {0.9, 0.1};
  return cfg;
}

void MotionConfig::validate() const {
  if (jump_prob[0] < 0.0 || jump_prob[1] < 0.0 ||
      std::abs(jump_prob[0] + jump_prob[1] - 1.0) > 1e-12) {
    throw ContractError("MotionConfig: jump_prob must be nonnegative and sum to 1");
  }
  if ((noise_small.array() < 0.0).any() || (noise_large.array() < 0.0).any()) {
    throw ContractError("MotionConfig: noise std devs must be nonnegative");
  }
}

void FilterConfig::validate() const {
  if (n_particles < 1) throw ContractError("FilterConfig: n_particles must be positive");
  if (!(obs_sigma > 0.0)) throw ContractError("FilterConfig: obs_sigma must be positive");
  if (!(resample_ess_frac > 0.0 && resample_ess_frac <= 1.0)) {
    throw ContractError("FilterConfig: resample_ess_frac must be in (0, 1]");
  }
  if (template_noise.dim() != kFeatureDim) {
    throw ContractError("FilterConfig: template noise dimension must match descriptor");
  }
  motion.validate();
  descriptor.validate();
}

KineticState propagate_kinetics(const KineticState& s, const MotionConfig& cfg,
                                CounterRng& rng) {
  const bool small_regime = rng.uniform() < cfg.jump_prob[0];
  const auto& dev = small_regime ? cfg.noise_small : cfg.noise_large;
  Eigen::Matrix<double, 6, 1> noise;
  for (int i = 0; i < 6; ++i) noise[i] = dev[i] * rng.normal();
  KineticState out = from_vector(cfg.transition * to_vector(s) + noise);
  out.h = std::max(out.h, kMinScale);
  return out;
}

double log_likelihood(const SpdMatrix& tmpl, const SpdMatrix& observed, double obs_sigma) {
  if (!(obs_sigma > 0.0)) throw ContractError("log_likelihood: obs_sigma must be positive");
  const double d = geodesic_distance(tmpl, observed);
  return -d * d / (2.0 * obs_sigma * obs_sigma);
}

std::pair<KineticState, SpdMatrix> mmse_estimate(std::span<const Particle> particles) {
  if (particles.empty()) throw ContractError("mmse_estimate: no particles");
  std::vector<double> log_weights(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    log_weights[i] = particles[i].log_weight;
  }
  if (*std::max_element(log_weights.begin(), log_weights.end()) == kNegInf) {
    throw ContractError("mmse_estimate: all weights are zero");
  }
  const std::vector<double> weights = normalized_weights(log_weights);

  KineticState mean;
  mean.x = mean.y = mean.vx = mean.vy = mean.h = 0.0;
  double sin_sum = 0.0, cos_sum = 0.0;
  std::vector<SpdMatrix> templates;
  templates.reserve(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const double w = weights[i];
    const KineticState& s = particles[i].state;
    mean.x += w * s.x;
    mean.y += w * s.y;
    mean.vx += w * s.vx;
    mean.vy += w * s.vy;
    mean.h += w * s.h;
    sin_sum += w * std::sin(s.theta);
    cos_sum += w * std::cos(s.theta);
    templates.push_back(particles[i].tmpl);
  }
  mean.theta = std::atan2(sin_sum, cos_sum);
  return {mean, log_euclidean_mean(weights, templates)};
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, double u) {
  const std::size_t n = weights.size();
  if (n == 0) throw ContractError("systematic_resample: empty weights");
  if (!(u >= 0.0 && u < 1.0)) throw ContractError("systematic_resample: u must be in [0, 1)");
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) throw ContractError("systematic_resample: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw ContractError("systematic_resample: all weights zero");
  if (std::abs(total - 1.0) > 1e-9) {
    throw ContractError("systematic_resample: weights must be normalized");
  }

  std::vector<std::size_t> indices;
  indices.reserve(n);
  std::size_t i = 0;
  double cumulative = weights[0];
  for (std::size_t k = 0; k < n; ++k) {
    const double position = (u + static_cast<double>(k)) / static_cast<double>(n);
    while (position > cumulative && i + 1 < n) {
      ++i;
      cumulative += weights[i];
    }
    indices.push_back(i);
  }
  return indices;
}

double effective_sample_size(std::span<const double> normalized_weights) {
  double sum_sq = 0.0;
  for (const double w : normalized_weights) sum_sq += w * w;
  if (!(sum_sq > 0.0)) throw ContractError("effective_sample_size: all weights zero");
  return 1.0 / sum_sq;
}

FilterState::FilterState(const GrayImage& frame0, const KineticState& init_state,
                         const TargetExtent& extent, FilterConfig cfg)
    : cfg_(std::move(cfg)),
      extent_(extent),
      last_estimate_{0, init_state, SpdMatrix::identity(kFeatureDim), 1.0} {
  cfg_.validate();
  require_region_inside(frame0, init_state, extent_);
  const SpdMatrix c0 = descriptor_from_state(frame0, init_state, extent_, cfg_.descriptor);
  const double log_w = -std::log(static_cast<double>(cfg_.n_particles));
  particles_.reserve(cfg_.n_particles);
  for (int i = 0; i < cfg_.n_particles; ++i) {
    particles_.push_back(Particle{init_state, c0, log_w});
  }
  last_estimate_ = Estimate{0, init_state, c0, static_cast<double>(cfg_.n_particles)};
}

FilterState::FilterState(Restore, FilterConfig cfg, const TargetExtent& extent,
                         int frame_index, std::vector<Particle> particles,
                         Estimate last_estimate)
    : cfg_(std::move(cfg)),
      extent_(extent),
      frame_index_(frame_index),
      particles_(std::move(particles)),
      last_estimate_(std::move(last_estimate)) {
  cfg_.validate();
  if (particles_.empty()) throw ContractError("FilterState::restore: no particles");
}

FilterState FilterState::restore(FilterConfig cfg, const TargetExtent& extent,
                                 int frame_index, std::vector<Particle> particles,
                                 Estimate last_estimate) {
  return FilterState(Restore{}, std::move(cfg), extent, frame_index, std::move(particles),
                     std::move(last_estimate));
}

double FilterState::current_ess() const {
  std::vector<double> log_weights(particles_.size());
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    log_weights[i] = particles_[i].log_weight;
  }
  return effective_sample_size(normalized_weights(log_weights));
}

Estimate FilterState::step(const GrayImage& frame) {
  const int frame_index = ++frame_index_;
  const std::size_t n = particles_.size();

  struct Propagated {
    KineticState state;
    std::optional<SpdMatrix> tmpl;
    double log_like;
  };
  std::vector<Propagated> next(n);

  // Per-particle work is pure and streams are keyed by (seed, frame,
  // particle), so any thread partition gives identical results.
  detail::parallel_for(n, cfg_.threads, [&](std::size_t i) {
    CounterRng kin_rng(cfg_.seed,
                       derive_stream({static_cast<std::uint64_t>(frame_index), i, kKineticsSalt}));
    Propagated& out = next[i];
    out.state = propagate_kinetics(particles_[i].state, cfg_.motion, kin_rng);
    out.tmpl = sample_log_walk(
        particles_[i].tmpl, cfg_.template_noise,
        derive_stream({static_cast<std::uint64_t>(frame_index), i, kTemplateSalt}));
    if (!center_in_frame(out.state, frame)) {
      out.log_like = kNegInf;  // killed, not clamped
      return;
    }
    const SpdMatrix observed =
        descriptor_from_state(frame, out.state, extent_, cfg_.descriptor);
    out.log_like = log_likelihood(*out.tmpl, observed, cfg_.obs_sigma);
  });

  std::vector<double> log_weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    particles_[i].state = next[i].state;
    particles_[i].tmpl = std::move(*next[i].tmpl);
    particles_[i].log_weight += next[i].log_like;
    log_weights[i] = particles_[i].log_weight;
  }

  if (*std::max_element(log_weights.begin(), log_weights.end()) == kNegInf) {
    throw TrackLostError("step: every particle left the frame or has zero weight",
                         last_estimate_);
  }

  const std::vector<double> weights = normalized_weights(log_weights);
  for (std::size_t i = 0; i < n; ++i) {
    particles_[i].log_weight = std::log(weights[i]);
  }
  const double ess = effective_sample_size(weights);

  auto [state_hat, tmpl_hat] = mmse_estimate(particles_);
  last_estimate_ = Estimate{frame_index, state_hat, std::move(tmpl_hat), ess};

  if (ess < cfg_.resample_ess_frac * static_cast<double>(n)) {
    const double u =
        CounterRng(cfg_.seed,
                   derive_stream({static_cast<std::uint64_t>(frame_index), kResampleSalt}))
            .uniform();
    const std::vector<std::size_t> offspring = systematic_resample(weights, u);
    std::vector<Particle> resampled;
    resampled.reserve(n);
    const double uniform_log_w = -std::log(static_cast<double>(n));
    for (const std::size_t idx : offspring) {
      resampled.push_back(particles_[idx]);
      resampled.back().log_weight = uniform_log_w;
    }
    particles_ = std::move(resampled);
  }

  return last_estimate_;
}

}  // namespace covtrack
