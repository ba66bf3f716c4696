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

#include <sstream>

#include "covtrack/config.hpp"
#include "covtrack/image.hpp"
#include "covtrack/io.hpp"
#include "covtrack/io_util.hpp"
#include "covtrack/synth.hpp"
#include "testutil.hpp"

using namespace covtrack;

namespace {

const unsigned char kGrayPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d,
    0x49, 0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x03, 0x00, 0x00, 0x00, 0x02,
    0x08, 0x00, 0x00, 0x00, 0x00, 0xb8, 0x1f, 0x39, 0xc6, 0x00, 0x00, 0x00,
    0x10, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x68, 0xf8, 0xcf,
    0xc0, 0x75, 0x42, 0x0e, 0x00, 0x09, 0xcf, 0x02, 0x70, 0xb3, 0xd0, 0x6d,
    0xae, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60,
    0x82,
};

const unsigned char kRgbPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d,
    0x49, 0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02,
    0x08, 0x02, 0x00, 0x00, 0x00, 0xfd, 0xd4, 0x9a, 0x73, 0x00, 0x00, 0x00,
    0x12, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xc0,
    0x00, 0xc2, 0x0c, 0xff, 0x81, 0x00, 0x00, 0x1f, 0xee, 0x05, 0xfb, 0x0b,
    0xd9, 0x68, 0x8b, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae,
    0x42, 0x60, 0x82,
};

std::string bytes_of(const unsigned char* data, std::size_t n) {
  return std::string(reinterpret_cast<const char*>(data), n);
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "covtrack_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("matrix text format: 17-digit roundtrip is bit exact") {
  CounterRng rng(9, 0);
  Eigen::MatrixXd m(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = (rng.uniform() - 0.5) * std::pow(10.0, i - j);
  }
  m(0, 0) = 1.0 / 3.0;
  m(1, 2) = -1e-17;
  std::ostringstream out;
  write_matrix(out, m);
  std::istringstream in(out.str());
  const Eigen::MatrixXd back = read_matrix(in);
  CHECK((back.array() == m.array()).all());

  std::istringstream bad("2\n1 2\n3");
  CHECK_THROWS_AS(read_matrix(bad), IoError);
}

TEST_CASE("PGM encode/decode roundtrip on quantized intensities") {
  std::vector<double> pixels;
  for (int i = 0; i < 12; ++i) pixels.push_back((i * 20 % 256) / 255.0);
  const GrayImage img(4, 3, pixels);
  const GrayImage back = decode_pgm(encode_pgm(img));
  CHECK(back.width() == 4);
  CHECK(back.height() == 3);
  CHECK(back.pixels() == img.pixels());
}

TEST_CASE("PGM parser: comments and whitespace in the header") {
  std::string data = "P5 # a comment\n# another\n 3\t2\n255\n";
  data += std::string("\x10\x20\x30\x40\x50\x60", 6);
  const GrayImage img = decode_pgm(data);
  CHECK(img.width() == 3);
  CHECK(img.height() == 2);
  CHECK(img.at(2, 1) == doctest::Approx(0x60 / 255.0));

  CHECK_THROWS_AS(decode_pgm("P2\n1 1\n255\n0"), IoError);
  CHECK_THROWS_AS(decode_pgm("P5\n2 2\n255\nab"), IoError);  // truncated body
  CHECK_THROWS_AS(decode_pgm("P5\n1 1\n65535\n\0\0"), IoError);
}

TEST_CASE("PNG decode: 8-bit grayscale") {
  const GrayImage img = decode_png(bytes_of(kGrayPng, sizeof(kGrayPng)));
  REQUIRE(img.width() == 3);
  REQUIRE(img.height() == 2);
  CHECK(img.at(0, 0) == doctest::Approx(0.0));
  CHECK(img.at(1, 0) == doctest::Approx(128.0 / 255.0));
  CHECK(img.at(2, 0) == doctest::Approx(1.0));
  CHECK(img.at(1, 1) == doctest::Approx(200.0 / 255.0));
}

TEST_CASE("PNG decode: color converts by luminance") {
  const GrayImage img = decode_png(bytes_of(kRgbPng, sizeof(kRgbPng)));
  REQUIRE(img.width() == 2);
  REQUIRE(img.height() == 2);
  CHECK(img.at(0, 0) == doctest::Approx(0.299).epsilon(1e-12));  // red
  CHECK(img.at(1, 0) == doctest::Approx(0.587).epsilon(1e-12));  // green
  CHECK(img.at(0, 1) == doctest::Approx(0.114).epsilon(1e-12));  // blue
  CHECK(img.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));    // white
  CHECK_THROWS_AS(decode_png("not a png"), IoError);
}

TEST_CASE("read_image dispatches by content, atomic writes leave no temp files") {
  const auto dir = temp_dir();
  const auto png_path = dir / "frame.png";
  atomic_write_file(png_path, bytes_of(kGrayPng, sizeof(kGrayPng)));
  CHECK(read_image(png_path).width() == 3);

  const GrayImage img = GrayImage::constant(5, 4, 0.5);
  const auto pgm_path = dir / "frame.pgm";
  write_pgm(pgm_path, img);
  CHECK(read_image(pgm_path).width() == 5);
  CHECK(!std::filesystem::exists(pgm_path.string() + ".tmp"));

  CHECK_THROWS_AS(read_image(dir / "missing.pgm"), IoError);
}

TEST_CASE("track CSV: roundtrip and schema checks") {
  std::vector<TrackRow> rows;
  for (int t = 0; t < 3; ++t) {
    TrackRow r;
    r.frame = t;
    r.state = KineticState{10.0 + t / 3.0, -2.5, 0.125, 1e-9, 1.0, -0.75};
    r.ess = 123.456789;
    rows.push_back(r);
  }
  const std::string text = encode_track_csv(rows);
  const std::vector<TrackRow> back = parse_track_csv(text);
  REQUIRE(back.size() == 3);
  for (int t = 0; t < 3; ++t) {
    CHECK(back[t].frame == rows[t].frame);
    CHECK(back[t].state.x == rows[t].state.x);
    CHECK(back[t].state.theta == rows[t].state.theta);
    CHECK(back[t].ess == rows[t].ess);
  }
  CHECK_THROWS_AS(parse_track_csv("frame,x,y\n1,2,3\n"), ConfigError);
  CHECK_THROWS_AS(parse_track_csv(text + "1,2\n"), ConfigError);
}

TEST_CASE("ground-truth CSV: roundtrip and schema checks") {
  const GroundTruth gt({{0, 10.5, 20.25, 8.0, 6.0}, {2, 11.5, 20.25, 8.0, 6.0}});
  const GroundTruth back = parse_gt_csv(encode_gt_csv(gt));
  REQUIRE(back.entries().size() == 2);
  CHECK(back.entries()[1].frame == 2);
  CHECK(back.entries()[1].gx == 11.5);
  CHECK(back.find(1) == nullptr);
  CHECK(back.find(2)->gy == 20.25);
  CHECK_THROWS_AS(parse_gt_csv("frame,x,y,w,h\n"), ConfigError);
}

TEST_CASE("metrics report formatting") {
  Metrics m;
  m.frames_scored = 5;
  m.frames_on_track = 3;
  m.on_track_ratio = 1.0;
  m.on_track_rms = 0.36514837167011072;
  const std::string report = format_metrics_report(m);
  CHECK(report.find("on_track_ratio=1.0\n") != std::string::npos);
  CHECK(report.find("on_track_rms=0.365148\n") != std::string::npos);
  CHECK(report.find("frames_scored=5\n") != std::string::npos);
}

TEST_CASE("MDS CSV layout") {
  Eigen::MatrixXd coords(2, 2);
  coords << 1.0, 2.0, 3.0, 4.0;
  const std::string labels_arr[] = {std::string("target"), std::string("background")};
  const std::string csv = encode_mds_csv(labels_arr, coords);
  CHECK(csv.find("index,label,c1,c2\n") == 0);
  CHECK(csv.find("0,target,1,2\n") != std::string::npos);
  CHECK(csv.find("1,background,3,4\n") != std::string::npos);
}

TEST_CASE("checkpoint: encode/parse/restore preserves the particle cloud") {
  SynthScenario sc;
  sc.width = 140;
  sc.height = 100;
  sc.target_w = 24;
  sc.target_h = 24;
  sc.segments = {TrajectorySegment{2, 1.0, 0.0, 0.0, 0.0}};
  const SynthSequence seq = synth_sequence(sc);

  FilterConfig cfg;
  cfg.n_particles = 8;
  cfg.seed = 77;
  FilterState filter(seq.frames[0], seq.poses[0], TargetExtent{24, 24}, cfg);
  filter.step(seq.frames[1]);

  const std::vector<std::string> config_echo = {"filter.seed=77", "filter.n_particles=8"};
  const std::string text = encode_checkpoint(filter, config_echo);
  const Checkpoint cp = parse_checkpoint(text);
  CHECK(cp.config_lines == config_echo);
  CHECK(cp.frame_index == 1);
  CHECK(cp.extent.width == 24.0);
  REQUIRE(cp.particles.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(cp.particles[i].state.x == filter.particles()[i].state.x);
    CHECK(cp.particles[i].log_weight == filter.particles()[i].log_weight);
    CHECK((cp.particles[i].tmpl.mat().array() ==
           filter.particles()[i].tmpl.mat().array())
              .all());
  }

  // A restored filter continues exactly like the original.
  FilterState restored = restore_filter(cp, cfg);
  const Estimate a = filter.step(seq.frames[2]);
  const Estimate b = restored.step(seq.frames[2]);
  CHECK(a.state.x == b.state.x);
  CHECK(a.ess == b.ess);
  CHECK((a.tmpl.mat().array() == b.tmpl.mat().array()).all());

  CHECK_THROWS_AS(parse_checkpoint("garbage"), IoError);
}

TEST_CASE("run config: defaults, overrides, unknown keys") {
  const RunConfig defaults = RunConfig::from_string("");
  CHECK(defaults.filter_n_particles == 200);
  CHECK(defaults.filter_obs_sigma == 0.4);
  CHECK(defaults.filter_template_sigma == 0.02);
  CHECK(defaults.descriptor_patch_side == 32);
  CHECK(defaults.motion_jump_prob[0] == 0.9);
  CHECK(!defaults.input_init.has_value());

  const RunConfig cfg = RunConfig::from_string(
      "# comment\n"
      "filter.n_particles = 64\n"
      "input.init=10,20,1,-1,1.5,0.2\n"
      "input.extent=40,30\n"
      "motion.noise_small=2,2,1,1,0.02,0.04\n"
      "synth.segments=10:2,0,0,0;5:0,1,0.1,0\n");
  CHECK(cfg.filter_n_particles == 64);
  REQUIRE(cfg.input_init.has_value());
  CHECK(cfg.input_init->vy == -1.0);
  CHECK(cfg.input_init->h == 1.5);
  CHECK(cfg.input_extent->width == 40.0);
  CHECK(cfg.motion_noise_small[5] == 0.04);
  REQUIRE(cfg.synth.segments.size() == 2);
  CHECK(cfg.synth.segments[1].rot_rate == 0.1);

  CHECK_THROWS_AS(RunConfig::from_string("filter.bogus=1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_string("filter.n_particles\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_string("input.extent=1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_string("filter.obs_sigma=abc\n"), ConfigError);
}

TEST_CASE("run config: echo lines reparse to the same configuration") {
  RunConfig cfg = RunConfig::from_string("filter.seed=123\nfilter.obs_sigma=0.5\n");
  std::string joined;
  for (const std::string& line : cfg.echo_lines()) joined += line + "\n";
  const RunConfig back = RunConfig::from_string(joined);
  CHECK(back.filter_seed == 123);
  CHECK(back.filter_obs_sigma == 0.5);
  CHECK(back.filter_n_particles == cfg.filter_n_particles);
  CHECK(back.synth.segments.size() == cfg.synth.segments.size());
}

TEST_CASE("run config: filter config wiring and frame resolution") {
  const RunConfig cfg = RunConfig::from_string(
      "filter.template_sigma=0.05\nfilter.seed=9\nmotion.jump_prob=0.8,0.2\n");
  const FilterConfig fc = cfg.to_filter_config();
  CHECK(fc.template_noise.sigma()(0, 0) == 0.05);
  CHECK(fc.motion.jump_prob[0] == 0.8);
  CHECK(fc.seed == 9);

  // Pattern mode resolves printf-style names.
  RunConfig pat;
  pat.input_frames = "/data/frame_%04d.pgm";
  pat.input_frame_count = 3;
  pat.input_frame_start = 5;
  const auto paths = pat.resolve_frames();
  REQUIRE(paths.size() == 3);
  CHECK(paths[0] == "/data/frame_0005.pgm");
  CHECK(paths[2] == "/data/frame_0007.pgm");

  // Directory mode lists sorted image files.
  const auto dir = temp_dir() / "frames";
  std::filesystem::create_directories(dir);
  write_pgm(dir / "b.pgm", GrayImage::constant(2, 2, 0.5));
  write_pgm(dir / "a.pgm", GrayImage::constant(2, 2, 0.5));
  atomic_write_file(dir / "notes.txt", "ignored");
  RunConfig dir_cfg;
  dir_cfg.input_frames = dir.string();
  const auto listed = dir_cfg.resolve_frames();
  REQUIRE(listed.size() == 2);
  CHECK(listed[0].filename() == "a.pgm");
}
