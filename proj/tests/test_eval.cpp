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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covtrack/descriptor.hpp"
#include "covtrack/manifold.hpp"
#include "covtrack/mds.hpp"
#include "covtrack/metrics.hpp"
#include "covtrack/synth.hpp"
#include "testutil.hpp"

using namespace covtrack;

namespace {

TrackRow row(int frame, double x, double y) {
  TrackRow r;
  r.frame = frame;
  r.state.x = x;
  r.state.y = y;
  r.ess = 1.0;
  return r;
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return d;
}

}  // namespace

TEST_CASE("gamma_error: plug-in values and contract") {
  CHECK(gamma_error(0.0, 0.0, 5.0, 5.0) == 0.0);
  CHECK(gamma_error(6.0, 10.0, 6.0, 10.0) == doctest::Approx(1.0));
  CHECK(gamma_error(3.0, 0.0, 6.0, 10.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(gamma_error(1.0, 1.0, 0.0, 1.0), ContractError);
  CHECK_THROWS_AS(gamma_error(-1.0, 0.0, 1.0, 1.0), ContractError);
}

TEST_CASE("gamma_error: homogeneous under joint scaling") {
  CounterRng rng(55, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double ex = 10.0 * rng.uniform();
    const double ey = 10.0 * rng.uniform();
    const double hx = 0.5 + 10.0 * rng.uniform();
    const double hy = 0.5 + 10.0 * rng.uniform();
    const double c = 0.1 + 5.0 * rng.uniform();
    CHECK(gamma_error(c * ex, c * ey, c * hx, c * hy) ==
          doctest::Approx(gamma_error(ex, ey, hx, hy)).epsilon(1e-12));
  }
}

TEST_CASE("score: perfect track and exact on-track boundary") {
  std::vector<GroundTruthEntry> entries;
  for (int t = 0; t < 4; ++t) entries.push_back({t, 100.0, 50.0, 8.0, 6.0});
  const GroundTruth gt(std::move(entries));

  std::vector<TrackRow> perfect;
  for (int t = 0; t < 4; ++t) perfect.push_back(row(t, 100.0, 50.0));
  const Metrics m1 = score(perfect, gt);
  CHECK(m1.on_track_ratio == 1.0);
  CHECK(m1.on_track_rms == 0.0);
  CHECK(m1.frames_scored == 4);

  std::vector<TrackRow> boundary;
  for (int t = 0; t < 4; ++t) boundary.push_back(row(t, 100.0 + 8.0, 50.0 + 6.0));
  const Metrics m2 = score(boundary, gt);
  CHECK(m2.on_track_ratio == 1.0);  // gamma == 1 counts as on-track
  CHECK(m2.on_track_rms == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("score: five-frame hand-computed fixture") {
  std::vector<GroundTruthEntry> entries;
  for (int t = 1; t <= 5; ++t) entries.push_back({t, 100.0, 100.0, 10.0, 10.0});
  const GroundTruth gt(std::move(entries));

  const std::vector<TrackRow> track = {
      row(1, 100.0, 100.0),  // gamma 0.00, on
      row(2, 104.0, 100.0),  // gamma 0.20, on
      row(3, 100.0, 108.0),  // gamma 0.40, on
      row(4, 115.0, 115.0),  // gamma 1.50, off
      row(5, 130.0, 100.0),  // gamma 1.50, off
  };
  const Metrics m = score(track, gt);
  CHECK(m.frames_scored == 5);
  CHECK(m.frames_on_track == 3);
  CHECK(m.on_track_ratio == doctest::Approx(0.6).epsilon(1e-15));
  // On-track squared terms: 0, 0.08, 0.32 -> rms = sqrt(0.4 / 3).
  CHECK(m.on_track_rms == doctest::Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-15));
  CHECK(m.per_frame_gamma.size() == 5);
  CHECK(m.per_frame_gamma[3] == doctest::Approx(1.5));
}

TEST_CASE("score: frames missing from ground truth are not scored") {
  std::vector<GroundTruthEntry> entries = {{0, 0.0, 0.0, 5.0, 5.0},
                                           {2, 0.0, 0.0, 5.0, 5.0}};
  const GroundTruth gt(std::move(entries));
  const std::vector<TrackRow> track = {row(0, 0, 0), row(1, 99, 99), row(2, 0, 0),
                                       row(3, 99, 99)};
  const Metrics m = score(track, gt);
  CHECK(m.frames_scored == 2);
  CHECK(m.on_track_ratio == 1.0);
}

TEST_CASE("score: translation invariance and empty overlap") {
  std::vector<GroundTruthEntry> entries;
  for (int t = 0; t < 3; ++t) {
    entries.push_back({t, 10.0 + t, 20.0, 4.0, 4.0});
  }
  const GroundTruth gt(std::move(entries));
  std::vector<TrackRow> track = {row(0, 11, 21), row(1, 12, 22), row(2, 12, 19)};
  const Metrics base = score(track, gt);

  std::vector<GroundTruthEntry> moved;
  for (int t = 0; t < 3; ++t) moved.push_back({t, 10.0 + t + 7.5, 20.0 - 3.25, 4.0, 4.0});
  std::vector<TrackRow> moved_track;
  for (const TrackRow& r : track) {
    moved_track.push_back(row(r.frame, r.state.x + 7.5, r.state.y - 3.25));
  }
  const Metrics shifted = score(moved_track, GroundTruth(std::move(moved)));
  CHECK(shifted.on_track_ratio == base.on_track_ratio);
  CHECK(shifted.on_track_rms == doctest::Approx(base.on_track_rms).epsilon(1e-12));

  const std::vector<TrackRow> disjoint = {row(10, 0, 0)};
  CHECK_THROWS_AS(score(disjoint, gt), ContractError);
}

TEST_CASE("GroundTruth: rejects unsorted frames and bad extents") {
  CHECK_THROWS_AS(GroundTruth({{1, 0, 0, 1, 1}, {1, 0, 0, 1, 1}}), ContractError);
  CHECK_THROWS_AS(GroundTruth({{0, 0, 0, 0, 1}}), ContractError);
}

TEST_CASE("classical_mds: two points embed exactly") {
  Eigen::MatrixXd d(2, 2);
  d << 0.0, 5.0, 5.0, 0.0;
  const MdsResult r = classical_mds(d, 1);
  REQUIRE(r.effective_dim == 1);
  CHECK(std::abs((r.coords(0, 0) - r.coords(1, 0))) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.relative_stress < 1e-12);
}

TEST_CASE("classical_mds: collinear points recover exact gaps in one dimension") {
  const double xs[3] = {0.0, 3.0, 7.0};
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) d(i, j) = std::abs(xs[i] - xs[j]);
  }
  const MdsResult r = classical_mds(d, 1);
  REQUIRE(r.effective_dim == 1);
  CHECK(std::abs(r.coords(0, 0) - r.coords(1, 0)) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(r.coords(1, 0) - r.coords(2, 0)) == doctest::Approx(4.0).epsilon(1e-9));

  // Asking for more dimensions than the data has flags truncation.
  const MdsResult wide = classical_mds(d, 2);
  CHECK(wide.truncated);
  CHECK(wide.effective_dim == 1);
}

TEST_CASE("classical_mds: planar cloud distances recovered to 1e-8") {
  CounterRng rng(66, 0);
  const int n = 12;
  Eigen::MatrixXd points(n, 2);
  for (int i = 0; i < n; ++i) {
    points(i, 0) = 10.0 * rng.uniform() - 5.0;
    points(i, 1) = 10.0 * rng.uniform() - 5.0;
  }
  const Eigen::MatrixXd d = pairwise_distances(points);
  const MdsResult r = classical_mds(d, 2);
  REQUIRE(r.effective_dim == 2);
  CHECK(r.relative_stress < 1e-8);
  const Eigen::MatrixXd recovered = pairwise_distances(r.coords);
  CHECK((recovered - d).cwiseAbs().maxCoeff() < 1e-8);
  // Output is centered.
  CHECK(r.coords.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("classical_mds: input validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(classical_mds(bad, 1), ContractError);
  Eigen::MatrixXd diag(2, 2);
  diag << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(classical_mds(diag, 1), ContractError);
}

TEST_CASE("synth_sequence: zero velocity renders identical frames") {
  SynthScenario sc;
  sc.width = 120;
  sc.height = 90;
  sc.target_w = 24;
  sc.target_h = 24;
  sc.segments = {TrajectorySegment{3, 0.0, 0.0, 0.0, 0.0}};
  const SynthSequence seq = synth_sequence(sc);
  REQUIRE(seq.frames.size() == 4);
  for (std::size_t t = 1; t < seq.frames.size(); ++t) {
    CHECK(seq.frames[t].pixels() == seq.frames[0].pixels());
  }
  for (const GroundTruthEntry& e : seq.gt.entries()) {
    CHECK(e.gx == seq.gt.entries()[0].gx);
    CHECK(e.hx == doctest::Approx(12.0));
  }
}

TEST_CASE("synth_sequence: constant velocity advances ground truth exactly") {
  SynthScenario sc;
  sc.width = 200;
  sc.height = 100;
  sc.target_w = 24;
  sc.target_h = 24;
  sc.start_x = 40.0;
  sc.start_y = 50.0;
  sc.segments = {TrajectorySegment{10, 2.0, 0.0, 0.0, 0.0}};
  const SynthSequence seq = synth_sequence(sc);
  for (int t = 0; t <= 10; ++t) {
    CHECK(seq.gt.entries()[t].gx == 40.0 + 2.0 * t);
    CHECK(seq.gt.entries()[t].gy == 50.0);
  }
}

TEST_CASE("synth_sequence: trajectory escaping the margin is rejected") {
  SynthScenario sc;
  sc.width = 100;
  sc.height = 100;
  sc.target_w = 24;
  sc.target_h = 24;
  sc.start_x = 50.0;
  sc.start_y = 50.0;
  sc.segments = {TrajectorySegment{40, 3.0, 0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(synth_sequence(sc), ContractError);
}

TEST_CASE("synth_sequence: appearance switch is a descriptor discontinuity") {
  SynthScenario sc;
  sc.width = 200;
  sc.height = 140;
  sc.segments = {TrajectorySegment{20, 1.0, 0.0, 0.0, 0.0}};
  sc.switch_frame = 10;
  sc.pixel_noise_sigma = 0.005;
  const SynthSequence seq = synth_sequence(sc);

  DescriptorConfig cfg;
  const TargetExtent extent{48, 48};
  std::vector<SpdMatrix> descriptors;
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    descriptors.push_back(
        descriptor_from_state(seq.frames[t], seq.poses[t], extent, cfg));
  }
  std::vector<double> steps;
  for (std::size_t t = 1; t < descriptors.size(); ++t) {
    steps.push_back(geodesic_distance(descriptors[t - 1], descriptors[t]));
  }
  const double switch_step = steps[sc.switch_frame - 1];
  std::vector<double> others = steps;
  others.erase(others.begin() + (sc.switch_frame - 1));
  std::sort(others.begin(), others.end());
  const double median = others[others.size() / 2];
  CHECK(switch_step >= 5.0 * median);
}

TEST_CASE("eval separation: target patches cluster against background patches") {
  SynthScenario sc;
  sc.width = 240;
  sc.height = 160;
  sc.start_x = 60.0;
  sc.start_y = 80.0;
  sc.segments = {TrajectorySegment{8, 2.0, 0.0, 0.01, 0.0}};
  sc.pixel_noise_sigma = 0.005;
  const SynthSequence seq = synth_sequence(sc);

  DescriptorConfig cfg;
  const TargetExtent extent{48, 48};
  std::vector<SpdMatrix> targets;
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    targets.push_back(descriptor_from_state(seq.frames[t], seq.poses[t], extent, cfg));
  }
  std::vector<SpdMatrix> backgrounds;
  for (int k = 0; k < 6; ++k) {
    KineticState pose;
    pose.x = 180.0 + 4.0 * k;
    pose.y = 40.0 + 10.0 * k;
    backgrounds.push_back(descriptor_from_state(seq.frames[0], pose, extent, cfg));
  }

  double tt = 0.0, tb = 0.0;
  int tt_n = 0, tb_n = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      tt += geodesic_distance(targets[i], targets[j]);
      ++tt_n;
    }
    for (const SpdMatrix& bg : backgrounds) {
      tb += geodesic_distance(targets[i], bg);
      ++tb_n;
    }
  }
  CHECK(tt / tt_n < tb / tb_n);
}
