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

#include <filesystem>
#include <vector>

#include "covtrack/errors.hpp"

namespace covtrack {

// Grayscale frame with intensities in [0, 1], row-major, immutable after
// construction. Pixel (x, y) has its center at continuous coordinate (x, y).
class GrayImage {
 public:
  GrayImage(int width, int height, std::vector<double> pixels);

  static GrayImage constant(int width, int height, double value);

  int width() const { return width_; }
  int height() const { return height_; }

  double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  /// Bilinear sample; coordinates outside the image clamp to the nearest
  /// border pixel.
  double sample_clamped(double x, double y) const;

  const std::vector<double>& pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  std::vector<double> pixels_;
};

/// Reads a frame by content: PGM (P5) or PNG, 8-bit. Color PNG converts to
/// luminance 0.299 R + 0.587 G + 0.114 B.
GrayImage read_image(const std::filesystem::path& path);

GrayImage decode_pgm(const std::string& bytes);
GrayImage decode_png(const std::string& bytes);

/// Binary 8-bit P5; written atomically.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
std::string encode_pgm(const GrayImage& img);

}  // namespace covtrack
