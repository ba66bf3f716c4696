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

#include "covtrack/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "covtrack/io_util.hpp"
#include "covtrack/rng.hpp"

namespace covtrack {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError("config: bad number for " + key + ": '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& value, const std::string& key) {
  const double v = parse_double(value, key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("config: expected integer for " + key + ": '" + value + "'");
  }
  return i;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ConfigError("config: bad unsigned integer for " + key + ": '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config: expected true/false for " + key + ": '" + value + "'");
}

std::vector<double> parse_doubles(const std::string& value, std::size_t count,
                                  const std::string& key) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string token;
  while (std::getline(in, token, ',')) out.push_back(parse_double(trim(token), key));
  if (out.size() != count) {
    throw ConfigError("config: " + key + " needs " + std::to_string(count) +
                      " comma-separated values");
  }
  return out;
}

// Segment syntax: "frames:vx,vy,rot_rate,scale_rate" joined by ';'.
std::vector<TrajectorySegment> parse_segments(const std::string& value,
                                              const std::string& key) {
  std::vector<TrajectorySegment> segments;
  std::istringstream in(value);
  std::string part;
  while (std::getline(in, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("config: " + key + " segment needs 'frames:vx,vy,rot,scale'");
    }
    TrajectorySegment seg;
    seg.frames = parse_int(trim(part.substr(0, colon)), key);
    const std::vector<double> v = parse_doubles(part.substr(colon + 1), 4, key);
    seg.vx = v[0];
    seg.vy = v[1];
    seg.rot_rate = v[2];
    seg.scale_rate = v[3];
    segments.push_back(seg);
  }
  if (segments.empty()) throw ConfigError("config: " + key + " has no segments");
  return segments;
}

std::string format_segments(const std::vector<TrajectorySegment>& segments) {
  std::ostringstream out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out << ";";
    out << segments[i].frames << ":" << segments[i].vx << "," << segments[i].vy << ","
        << segments[i].rot_rate << "," << segments[i].scale_rate;
  }
  return out.str();
}

template <std::size_t N>
std::string format_array(const std::array<double, N>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < N; ++i) out << (i > 0 ? "," : "") << values[i];
  return out.str();
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  cfg.synth.segments = {TrajectorySegment{100, 1.0, 0.0, 0.0, 0.0}};

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "input.frames") {
      cfg.input_frames = value;
    } else if (key == "input.frame_start") {
      cfg.input_frame_start = parse_int(value, key);
    } else if (key == "input.frame_count") {
      cfg.input_frame_count = parse_int(value, key);
    } else if (key == "input.init") {
      const auto v = parse_doubles(value, 6, key);
      cfg.input_init = KineticState{v[0], v[1], v[2], v[3], v[4], v[5]};
    } else if (key == "input.extent") {
      const auto v = parse_doubles(value, 2, key);
      cfg.input_extent = TargetExtent{v[0], v[1]};
    } else if (key == "filter.n_particles") {
      cfg.filter_n_particles = parse_int(value, key);
    } else if (key == "filter.obs_sigma") {
      cfg.filter_obs_sigma = parse_double(value, key);
    } else if (key == "filter.template_sigma") {
      cfg.filter_template_sigma = parse_double(value, key);
    } else if (key == "filter.resample_ess_frac") {
      cfg.filter_resample_ess_frac = parse_double(value, key);
    } else if (key == "filter.seed") {
      cfg.filter_seed = parse_u64(value, key);
    } else if (key == "filter.threads") {
      cfg.filter_threads = parse_int(value, key);
    } else if (key == "motion.noise_small") {
      const auto v = parse_doubles(value, 6, key);
      std::copy(v.begin(), v.end(), cfg.motion_noise_small.begin());
    } else if (key == "motion.noise_large") {
      const auto v = parse_doubles(value, 6, key);
      std::copy(v.begin(), v.end(), cfg.motion_noise_large.begin());
    } else if (key == "motion.jump_prob") {
      const auto v = parse_doubles(value, 2, key);
      cfg.motion_jump_prob = {v[0], v[1]};
    } else if (key == "descriptor.patch_side") {
      cfg.descriptor_patch_side = parse_int(value, key);
    } else if (key == "descriptor.regularization_eps") {
      cfg.descriptor_regularization_eps = parse_double(value, key);
    } else if (key == "output.dir") {
      cfg.output_dir = value;
    } else if (key == "output.track_csv") {
      cfg.output_track_csv = value;
    } else if (key == "output.checkpoint") {
      cfg.output_checkpoint = value;
    } else if (key == "output.overlay") {
      cfg.output_overlay = parse_bool(value, key);
    } else if (key == "output.overlay_dir") {
      cfg.output_overlay_dir = value;
    } else if (key == "output.overlay_particles") {
      cfg.output_overlay_particles = parse_int(value, key);
    } else if (key == "synth.width") {
      cfg.synth.width = parse_int(value, key);
    } else if (key == "synth.height") {
      cfg.synth.height = parse_int(value, key);
    } else if (key == "synth.target_w") {
      cfg.synth.target_w = parse_int(value, key);
    } else if (key == "synth.target_h") {
      cfg.synth.target_h = parse_int(value, key);
    } else if (key == "synth.texture_seed") {
      cfg.synth.texture_seed = parse_u64(value, key);
    } else if (key == "synth.start") {
      const auto v = parse_doubles(value, 2, key);
      cfg.synth.start_x = v[0];
      cfg.synth.start_y = v[1];
    } else if (key == "synth.start_h") {
      cfg.synth.start_h = parse_double(value, key);
    } else if (key == "synth.start_theta") {
      cfg.synth.start_theta = parse_double(value, key);
    } else if (key == "synth.segments") {
      cfg.synth.segments = parse_segments(value, key);
    } else if (key == "synth.switch_frame") {
      cfg.synth.switch_frame = parse_int(value, key);
    } else if (key == "synth.noise_sigma") {
      cfg.synth.pixel_noise_sigma = parse_double(value, key);
    } else if (key == "synth.margin") {
      cfg.synth.margin = parse_double(value, key);
    } else if (key == "synth.frame_prefix") {
      cfg.synth_frame_prefix = value;
    } else if (key == "synth.gt_csv") {
      cfg.synth_gt_csv = value;
    } else if (key == "mds.patches") {
      cfg.mds_patches = value;
    } else if (key == "mds.extent") {
      const auto v = parse_doubles(value, 2, key);
      cfg.mds_extent = TargetExtent{v[0], v[1]};
    } else if (key == "mds.dim") {
      cfg.mds_dim = parse_int(value, key);
    } else if (key == "mds.out") {
      cfg.mds_out = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  return from_string(read_file(path));
}

std::vector<std::string> RunConfig::echo_lines() const {
  std::vector<std::string> lines;
  const auto add = [&lines](const std::string& key, const std::string& value) {
    lines.push_back(key + "=" + value);
  };
  const auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  add("input.frames", input_frames);
  add("input.frame_start", std::to_string(input_frame_start));
  add("input.frame_count", std::to_string(input_frame_count));
  if (input_init) {
    const KineticState& s = *input_init;
    add("input.init", num(s.x) + "," + num(s.y) + "," + num(s.vx) + "," + num(s.vy) + "," +
                          num(s.h) + "," + num(s.theta));
  }
  if (input_extent) {
    add("input.extent", num(input_extent->width) + "," + num(input_extent->height));
  }
  add("filter.n_particles", std::to_string(filter_n_particles));
  add("filter.obs_sigma", num(filter_obs_sigma));
  add("filter.template_sigma", num(filter_template_sigma));
  add("filter.resample_ess_frac", num(filter_resample_ess_frac));
  add("filter.seed", std::to_string(filter_seed));
  add("filter.threads", std::to_string(filter_threads));
  add("motion.noise_small", format_array(motion_noise_small));
  add("motion.noise_large", format_array(motion_noise_large));
  add("motion.jump_prob", format_array(motion_jump_prob));
  add("descriptor.patch_side", std::to_string(descriptor_patch_side));
  add("descriptor.regularization_eps", num(descriptor_regularization_eps));
  add("output.dir", output_dir);
  add("output.track_csv", output_track_csv);
  add("output.checkpoint", output_checkpoint);
  add("output.overlay", output_overlay ? "true" : "false");
  add("output.overlay_dir", output_overlay_dir);
  add("output.overlay_particles", std::to_string(output_overlay_particles));
  add("synth.width", std::to_string(synth.width));
  add("synth.height", std::to_string(synth.height));
  add("synth.target_w", std::to_string(synth.target_w));
  add("synth.target_h", std::to_string(synth.target_h));
  add("synth.texture_seed", std::to_string(synth.texture_seed));
  add("synth.start", num(synth.start_x) + "," + num(synth.start_y));
  add("synth.start_h", num(synth.start_h));
  add("synth.start_theta", num(synth.start_theta));
  add("synth.segments", format_segments(synth.segments));
  add("synth.switch_frame", std::to_string(synth.switch_frame));
  add("synth.noise_sigma", num(synth.pixel_noise_sigma));
  add("synth.margin", num(synth.margin));
  add("synth.frame_prefix", synth_frame_prefix);
  add("synth.gt_csv", synth_gt_csv);
  if (!mds_patches.empty()) add("mds.patches", mds_patches);
  if (mds_extent) add("mds.extent", num(mds_extent->width) + "," + num(mds_extent->height));
  add("mds.dim", std::to_string(mds_dim));
  add("mds.out", mds_out);
  return lines;
}

FilterConfig RunConfig::to_filter_config() const {
  FilterConfig cfg;
  cfg.n_particles = filter_n_particles;
  cfg.obs_sigma = filter_obs_sigma;
  cfg.resample_ess_frac = filter_resample_ess_frac;
  cfg.seed = filter_seed;
  cfg.threads = filter_threads;
  // The template walk gets its own stream family derived from the run seed.
  cfg.template_noise = NoiseSpec::uniform(kFeatureDim, filter_template_sigma,
                                          derive_stream({filter_seed, 0x74656d70ull}));
  cfg.motion = MotionConfig::defaults();
  for (int i = 0; i < 6; ++i) {
    cfg.motion.noise_small[i] = motion_noise_small[i];
    cfg.motion.noise_large[i] = motion_noise_large[i];
  }
  cfg.motion.jump_prob = motion_jump_prob;
  cfg.descriptor.patch_side = descriptor_patch_side;
  cfg.descriptor.regularization_eps = descriptor_regularization_eps;
  cfg.validate();
  return cfg;
}

std::vector<std::filesystem::path> RunConfig::resolve_frames() const {
  if (input_frames.empty()) {
    throw ConfigError("config: input.frames is required");
  }
  std::vector<std::filesystem::path> paths;
  if (input_frames.find('%') != std::string::npos) {
    if (input_frame_count < 1) {
      throw ConfigError("config: pattern mode needs input.frame_count");
    }
    for (int i = 0; i < input_frame_count; ++i) {
      char buf[4096];
      const int written = std::snprintf(buf, sizeof(buf), input_frames.c_str(),
                                        input_frame_start + i);
      if (written <= 0 || written >= static_cast<int>(sizeof(buf))) {
        throw ConfigError("config: bad frame pattern '" + input_frames + "'");
      }
      paths.emplace_back(buf);
    }
    return paths;
  }

  const std::filesystem::path dir(input_frames);
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("config: input.frames directory not found: " + input_frames);
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".png") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  if (input_frame_start > 0 || input_frame_count >= 0) {
    const std::size_t start = std::min<std::size_t>(input_frame_start, paths.size());
    std::size_t count = paths.size() - start;
    if (input_frame_count >= 0) {
      count = std::min<std::size_t>(count, static_cast<std::size_t>(input_frame_count));
    }
    paths = std::vector<std::filesystem::path>(paths.begin() + start,
                                               paths.begin() + start + count);
  }
  if (paths.empty()) throw IoError("config: no frames found under " + input_frames);
  return paths;
}

}  // namespace covtrack
