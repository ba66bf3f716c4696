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

#include "covtrack/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "covtrack/io_util.hpp"

namespace covtrack {
namespace {

constexpr char kTrackHeader[] = "frame,x,y,vx,vy,h,theta,ess";
constexpr char kGtHeader[] = "frame,gx,gy,Hx,Hy";
constexpr char kCheckpointMagic[] = "covtrack-checkpoint 1";

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Short human-facing number; integral values keep one decimal so reports
// read `ratio=1.0` rather than `ratio=1`.
std::string format_report_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s = buf;
  if (s.find_first_of(".einf") == std::string::npos) s += ".0";
  return s;
}

double parse_double(const std::string& token, const char* context) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError(std::string(context) + ": malformed number '" + token + "'");
  }
  return value;
}

int parse_int(const std::string& token, const char* context) {
  const double v = parse_double(token, context);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError(std::string(context) + ": expected integer, got '" + token + "'");
  }
  return i;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string> non_empty_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string encode_track_csv(std::span<const TrackRow> rows) {
  std::ostringstream out;
  out << kTrackHeader << "\n";
  for (const TrackRow& r : rows) {
    out << r.frame << "," << format_g17(r.state.x) << "," << format_g17(r.state.y) << ","
        << format_g17(r.state.vx) << "," << format_g17(r.state.vy) << ","
        << format_g17(r.state.h) << "," << format_g17(r.state.theta) << ","
        << format_g17(r.ess) << "\n";
  }
  return out.str();
}

std::vector<TrackRow> parse_track_csv(const std::string& text) {
  const std::vector<std::string> lines = non_empty_lines(text);
  if (lines.empty() || lines[0] != kTrackHeader) {
    throw ConfigError("track CSV: expected header '" + std::string(kTrackHeader) + "'");
  }
  std::vector<TrackRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split(lines[i], ',');
    if (f.size() != 8) throw ConfigError("track CSV: row with wrong field count");
    TrackRow row;
    row.frame = parse_int(f[0], "track CSV");
    row.state.x = parse_double(f[1], "track CSV");
    row.state.y = parse_double(f[2], "track CSV");
    row.state.vx = parse_double(f[3], "track CSV");
    row.state.vy = parse_double(f[4], "track CSV");
    row.state.h = parse_double(f[5], "track CSV");
    row.state.theta = parse_double(f[6], "track CSV");
    row.ess = parse_double(f[7], "track CSV");
    rows.push_back(row);
  }
  return rows;
}

void write_track_csv(const std::filesystem::path& path, std::span<const TrackRow> rows) {
  atomic_write_file(path, encode_track_csv(rows));
}

std::vector<TrackRow> read_track_csv(const std::filesystem::path& path) {
  return parse_track_csv(read_file(path));
}

std::string encode_gt_csv(const GroundTruth& gt) {
  std::ostringstream out;
  out << kGtHeader << "\n";
  for (const GroundTruthEntry& e : gt.entries()) {
    out << e.frame << "," << format_g17(e.gx) << "," << format_g17(e.gy) << ","
        << format_g17(e.hx) << "," << format_g17(e.hy) << "\n";
  }
  return out.str();
}

GroundTruth parse_gt_csv(const std::string& text) {
  const std::vector<std::string> lines = non_empty_lines(text);
  if (lines.empty() || lines[0] != kGtHeader) {
    throw ConfigError("ground-truth CSV: expected header '" + std::string(kGtHeader) + "'");
  }
  std::vector<GroundTruthEntry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split(lines[i], ',');
    if (f.size() != 5) throw ConfigError("ground-truth CSV: row with wrong field count");
    entries.push_back(GroundTruthEntry{parse_int(f[0], "gt CSV"),
                                       parse_double(f[1], "gt CSV"),
                                       parse_double(f[2], "gt CSV"),
                                       parse_double(f[3], "gt CSV"),
                                       parse_double(f[4], "gt CSV")});
  }
  return GroundTruth(std::move(entries));
}

void write_gt_csv(const std::filesystem::path& path, const GroundTruth& gt) {
  atomic_write_file(path, encode_gt_csv(gt));
}

GroundTruth read_gt_csv(const std::filesystem::path& path) {
  return parse_gt_csv(read_file(path));
}

std::string format_metrics_report(const Metrics& metrics) {
  std::ostringstream out;
  out << "frames_scored=" << metrics.frames_scored << "\n";
  out << "frames_on_track=" << metrics.frames_on_track << "\n";
  out << "on_track_ratio=" << format_report_value(metrics.on_track_ratio) << "\n";
  out << "on_track_rms=" << format_report_value(metrics.on_track_rms) << "\n";
  return out.str();
}

std::string encode_mds_csv(std::span<const std::string> labels,
                           const Eigen::MatrixXd& coords) {
  if (static_cast<Eigen::Index>(labels.size()) != coords.rows()) {
    throw ContractError("encode_mds_csv: label/coordinate count mismatch");
  }
  std::ostringstream out;
  out << "index,label";
  for (Eigen::Index k = 0; k < coords.cols(); ++k) out << ",c" << (k + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out << i << "," << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < coords.cols(); ++k) {
      out << "," << format_g17(coords(i, k));
    }
    out << "\n";
  }
  return out.str();
}

std::string encode_checkpoint(const FilterState& filter,
                              std::span<const std::string> config_lines) {
  std::ostringstream out;
  out << kCheckpointMagic << "\n";
  out << "config " << config_lines.size() << "\n";
  for (const std::string& line : config_lines) out << line << "\n";
  out << "extent " << format_g17(filter.extent().width) << " "
      << format_g17(filter.extent().height) << "\n";
  out << "frame " << filter.frame_index() << "\n";
  const Estimate& est = filter.last_estimate();
  out << "estimate " << est.frame_index << " " << format_g17(est.state.x) << " "
      << format_g17(est.state.y) << " " << format_g17(est.state.vx) << " "
      << format_g17(est.state.vy) << " " << format_g17(est.state.h) << " "
      << format_g17(est.state.theta) << " " << format_g17(est.ess) << "\n";
  write_matrix(out, est.tmpl.mat());
  out << "particles " << filter.particles().size() << "\n";
  for (const Particle& p : filter.particles()) {
    out << format_g17(p.state.x) << " " << format_g17(p.state.y) << " "
        << format_g17(p.state.vx) << " " << format_g17(p.state.vy) << " "
        << format_g17(p.state.h) << " " << format_g17(p.state.theta) << " "
        << format_g17(p.log_weight) << "\n";
    write_matrix(out, p.tmpl.mat());
  }
  return out.str();
}

namespace {

double next_token_double(std::istream& in, const char* context) {
  std::string token;
  if (!(in >> token)) throw IoError(std::string(context) + ": truncated checkpoint");
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw IoError(std::string(context) + ": bad number '" + token + "'");
  }
  return value;
}

KineticState read_state(std::istream& in, const char* context) {
  KineticState s;
  s.x = next_token_double(in, context);
  s.y = next_token_double(in, context);
  s.vx = next_token_double(in, context);
  s.vy = next_token_double(in, context);
  s.h = next_token_double(in, context);
  s.theta = next_token_double(in, context);
  return s;
}

}  // namespace

Checkpoint parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic) {
    throw IoError("checkpoint: bad magic line");
  }
  std::string keyword;
  std::size_t config_count = 0;
  if (!(in >> keyword >> config_count) || keyword != "config") {
    throw IoError("checkpoint: expected config section");
  }
  std::getline(in, line);  // finish the config count line
  Checkpoint cp;
  for (std::size_t i = 0; i < config_count; ++i) {
    if (!std::getline(in, line)) throw IoError("checkpoint: truncated config echo");
    cp.config_lines.push_back(line);
  }
  if (!(in >> keyword) || keyword != "extent") throw IoError("checkpoint: expected extent");
  cp.extent.width = next_token_double(in, "extent");
  cp.extent.height = next_token_double(in, "extent");
  if (!(in >> keyword >> cp.frame_index) || keyword != "frame") {
    throw IoError("checkpoint: expected frame index");
  }
  if (!(in >> keyword >> cp.estimate_row.frame) || keyword != "estimate") {
    throw IoError("checkpoint: expected estimate");
  }
  cp.estimate_row.state = read_state(in, "estimate");
  cp.estimate_row.ess = next_token_double(in, "estimate");
  cp.estimate_template = read_matrix(in);
  std::size_t n_particles = 0;
  if (!(in >> keyword >> n_particles) || keyword != "particles") {
    throw IoError("checkpoint: expected particles section");
  }
  cp.particles.reserve(n_particles);
  for (std::size_t i = 0; i < n_particles; ++i) {
    const KineticState state = read_state(in, "particle");
    const double log_weight = next_token_double(in, "particle");
    cp.particles.push_back(Particle{state, SpdMatrix(read_matrix(in)), log_weight});
  }
  return cp;
}

void write_checkpoint(const std::filesystem::path& path, const FilterState& filter,
                      std::span<const std::string> config_lines) {
  atomic_write_file(path, encode_checkpoint(filter, config_lines));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_file(path));
}

FilterState restore_filter(const Checkpoint& cp, FilterConfig cfg) {
  Estimate est{cp.estimate_row.frame, cp.estimate_row.state,
               SpdMatrix(cp.estimate_template), cp.estimate_row.ess};
  return FilterState::restore(std::move(cfg), cp.extent, cp.frame_index, cp.particles,
                              std::move(est));
}

}  // namespace covtrack
