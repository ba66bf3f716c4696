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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "covtrack/io.hpp"
#include "covtrack/io_util.hpp"
#include "covtrack/mds.hpp"

namespace covtrack::cli {
namespace fs = std::filesystem;

namespace {

std::filesystem::path frame_name(const std::string& prefix, int index,
                                 const char* extension) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return prefix + std::string(buf) + extension;
}

void draw_box(std::vector<double>& pixels, int width, int height,
              const KineticState& pose, const TargetExtent& extent, double value) {
  const double half_w = 0.5 * extent.width * pose.h;
  const double half_h = 0.5 * extent.height * pose.h;
  const double cos_t = std::cos(pose.theta);
  const double sin_t = std::sin(pose.theta);
  const auto corner = [&](double su, double sv) {
    const double u = su * half_w;
    const double v = sv * half_h;
    return std::pair<double, double>{pose.x + u * cos_t - v * sin_t,
                                     pose.y + u * sin_t + v * cos_t};
  };
  const std::array<std::pair<double, double>, 4> corners = {
      corner(-1, -1), corner(1, -1), corner(1, 1), corner(-1, 1)};
  for (int e = 0; e < 4; ++e) {
    const auto [x0, y0] = corners[e];
    const auto [x1, y1] = corners[(e + 1) % 4];
    const int steps = std::max(2, static_cast<int>(std::hypot(x1 - x0, y1 - y0)) * 2);
    for (int s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      const int px = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
      const int py = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
      if (px < 0 || px >= width || py < 0 || py >= height) continue;
      pixels[static_cast<std::size_t>(py) * width + px] = value;
    }
  }
}

void write_overlay(const fs::path& dir, int frame_index, const GrayImage& frame,
                   const FilterState& filter, const KineticState& estimate,
                   int n_particle_boxes) {
  std::vector<double> pixels = frame.pixels();
  if (n_particle_boxes > 0) {
    std::vector<const Particle*> ranked;
    ranked.reserve(filter.particles().size());
    for (const Particle& p : filter.particles()) ranked.push_back(&p);
    std::partial_sort(ranked.begin(),
                      ranked.begin() + std::min<std::size_t>(n_particle_boxes, ranked.size()),
                      ranked.end(), [](const Particle* a, const Particle* b) {
                        return a->log_weight > b->log_weight;
                      });
    const std::size_t count = std::min<std::size_t>(n_particle_boxes, ranked.size());
    for (std::size_t i = 0; i < count; ++i) {
      draw_box(pixels, frame.width(), frame.height(), ranked[i]->state, filter.extent(),
               0.6);
    }
  }
  draw_box(pixels, frame.width(), frame.height(), estimate, filter.extent(), 1.0);
  write_pgm(dir / frame_name("overlay_", frame_index, ".pgm"),
            GrayImage(frame.width(), frame.height(), std::move(pixels)));
}

}  // namespace

int cmd_track(const RunConfig& cfg) {
  if (!cfg.input_init) throw ConfigError("track: input.init is required");
  if (!cfg.input_extent) throw ConfigError("track: input.extent is required");
  const std::vector<fs::path> frame_paths = cfg.resolve_frames();
  const FilterConfig filter_cfg = cfg.to_filter_config();

  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  const fs::path overlay_dir = out_dir / cfg.output_overlay_dir;
  if (cfg.output_overlay) fs::create_directories(overlay_dir);

  const GrayImage frame0 = read_image(frame_paths[0]);
  FilterState filter(frame0, *cfg.input_init, *cfg.input_extent, filter_cfg);

  std::vector<TrackRow> rows;
  rows.push_back(TrackRow{0, filter.last_estimate().state, filter.last_estimate().ess});
  if (cfg.output_overlay) {
    write_overlay(overlay_dir, 0, frame0, filter, filter.last_estimate().state,
                  cfg.output_overlay_particles);
  }

  bool lost = false;
  for (std::size_t i = 1; i < frame_paths.size(); ++i) {
    const GrayImage frame = read_image(frame_paths[i]);
    try {
      const Estimate est = filter.step(frame);
      rows.push_back(TrackRow{est.frame_index, est.state, est.ess});
      if (cfg.output_overlay) {
        write_overlay(overlay_dir, est.frame_index, frame, filter, est.state,
                      cfg.output_overlay_particles);
      }
    } catch (const TrackLostError& err) {
      std::cerr << "track lost at frame " << i << ": " << err.what() << "\n";
      lost = true;
      break;
    }
  }

  write_track_csv(out_dir / cfg.output_track_csv, rows);
  if (!lost) {
    const std::vector<std::string> echo = cfg.echo_lines();
    write_checkpoint(out_dir / cfg.output_checkpoint, filter, echo);
  }
  std::cout << "frames_tracked=" << rows.size() << "\n";
  return lost ? kExitTrackLost : kExitOk;
}

int cmd_eval(const fs::path& track_csv, const fs::path& gt_csv) {
  const std::vector<TrackRow> rows = read_track_csv(track_csv);
  const GroundTruth gt = read_gt_csv(gt_csv);
  const Metrics metrics = score(rows, gt);
  std::cout << format_metrics_report(metrics);
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg) {
  const SynthSequence seq = synth_sequence(cfg.synth);
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    write_pgm(out_dir / frame_name(cfg.synth_frame_prefix, static_cast<int>(t), ".pgm"),
              seq.frames[t]);
  }
  write_gt_csv(out_dir / cfg.synth_gt_csv, seq.gt);
  const KineticState& p0 = seq.poses[0];
  std::cout << "frames_written=" << seq.frames.size() << "\n";
  std::cout << "init=" << p0.x << "," << p0.y << "," << p0.vx << "," << p0.vy << ","
            << p0.h << "," << p0.theta << "\n";
  std::cout << "extent=" << cfg.synth.target_w << "," << cfg.synth.target_h << "\n";
  return kExitOk;
}

int cmd_mds(const RunConfig& cfg) {
  if (cfg.mds_patches.empty()) throw ConfigError("mds: mds.patches is required");
  if (!cfg.mds_extent) throw ConfigError("mds: mds.extent is required");

  // Patch list CSV: label,image,x,y,h,theta.
  const std::string text = read_file(cfg.mds_patches);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.find("label,image,x,y,h,theta") != 0) {
    throw ConfigError("mds: patch list needs header 'label,image,x,y,h,theta'");
  }
  struct Entry {
    std::string label;
    KineticState pose;
  };
  std::vector<Entry> entries;
  std::vector<SpdMatrix> descriptors;
  DescriptorConfig desc_cfg;
  desc_cfg.patch_side = cfg.descriptor_patch_side;
  desc_cfg.regularization_eps = cfg.descriptor_regularization_eps;
  std::map<std::string, GrayImage> image_cache;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6) throw ConfigError("mds: patch row needs 6 fields");
    Entry entry;
    entry.label = fields[0];
    entry.pose.x = std::stod(fields[2]);
    entry.pose.y = std::stod(fields[3]);
    entry.pose.h = std::stod(fields[4]);
    entry.pose.theta = std::stod(fields[5]);
    auto it = image_cache.find(fields[1]);
    if (it == image_cache.end()) {
      it = image_cache.emplace(fields[1], read_image(fields[1])).first;
    }
    descriptors.push_back(
        descriptor_from_state(it->second, entry.pose, *cfg.mds_extent, desc_cfg));
    entries.push_back(std::move(entry));
  }
  if (entries.size() < 2) throw ConfigError("mds: need at least two patches");

  const Eigen::Index n = static_cast<Eigen::Index>(entries.size());
  Eigen::MatrixXd distances = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      distances(i, j) = distances(j, i) = geodesic_distance(descriptors[i], descriptors[j]);
    }
  }

  const MdsResult mds = classical_mds(distances, cfg.mds_dim);
  std::vector<std::string> labels;
  labels.reserve(entries.size());
  for (const Entry& e : entries) labels.push_back(e.label);
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  atomic_write_file(out_dir / cfg.mds_out, encode_mds_csv(labels, mds.coords));

  std::cout << "embedded=" << n << "\n";
  std::cout << "effective_dim=" << mds.effective_dim << "\n";
  std::cout << "truncated=" << (mds.truncated ? "true" : "false") << "\n";
  std::cout << "relative_stress=" << mds.relative_stress << "\n";

  // Cluster separation between the two label groups, when both exist.
  double tt_sum = 0.0, tb_sum = 0.0;
  int tt_count = 0, tb_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool ti = labels[i] == "target";
      const bool tj = labels[j] == "target";
      if (ti && tj) {
        tt_sum += distances(i, j);
        ++tt_count;
      } else if (ti != tj) {
        tb_sum += distances(i, j);
        ++tb_count;
      }
    }
  }
  if (tt_count > 0 && tb_count > 0) {
    const double tt_mean = tt_sum / tt_count;
    const double tb_mean = tb_sum / tb_count;
    std::cout << "target_target_mean=" << tt_mean << "\n";
    std::cout << "target_background_mean=" << tb_mean << "\n";
    std::cout << "separated=" << (tt_mean < tb_mean ? "true" : "false") << "\n";
  }
  return kExitOk;
}

int report_error_and_exit_code() {
  try {
    throw;
  } catch (const TrackLostError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTrackLost;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const OutOfViewError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace covtrack::cli
