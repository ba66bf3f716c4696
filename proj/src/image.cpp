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

#include "covtrack/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <sstream>
#include <string>

#include "covtrack/io_util.hpp"

namespace covtrack {

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ < 1 || height_ < 1) {
    throw ContractError("GrayImage: dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width_) * height_) {
    throw ContractError("GrayImage: pixel count does not match dimensions");
  }
  for (const double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ContractError("GrayImage: intensities must be finite and in [0, 1]");
    }
  }
}

GrayImage GrayImage::constant(int width, int height, double value) {
  return GrayImage(width, height,
                   std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

double GrayImage::sample_clamped(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
  const int x0 = std::min(static_cast<int>(x), width_ - 2 >= 0 ? width_ - 2 : 0);
  const int y0 = std::min(static_cast<int>(y), height_ - 2 >= 0 ? height_ - 2 : 0);
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  return at(x0, y0) * (1.0 - fx) * (1.0 - fy) + at(x1, y0) * fx * (1.0 - fy) +
         at(x0, y1) * (1.0 - fx) * fy + at(x1, y1) * fx * fy;
}

namespace {

// Skips PGM whitespace and '#' comment lines.
void skip_pgm_separators(const std::string& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else {
      break;
    }
  }
}

int parse_pgm_int(const std::string& bytes, std::size_t& pos) {
  skip_pgm_separators(bytes, pos);
  if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    throw IoError("PGM: malformed header");
  }
  long value = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1 << 24) throw IoError("PGM: header value out of range");
    ++pos;
  }
  return static_cast<int>(value);
}

bool looks_like_png(const std::string& bytes) {
  static const unsigned char magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), magic, 8) == 0;
}

struct PngReadState {
  const std::string* bytes;
  std::size_t offset;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->offset + count > state->bytes->size()) {
    png_error(png, "read past end of buffer");
  }
  std::memcpy(out, state->bytes->data() + state->offset, count);
  state->offset += count;
}

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw IoError("PGM: expected binary P5 magic");
  }
  std::size_t pos = 2;
  const int width = parse_pgm_int(bytes, pos);
  const int height = parse_pgm_int(bytes, pos);
  const int maxval = parse_pgm_int(bytes, pos);
  if (width < 1 || height < 1) throw IoError("PGM: invalid dimensions");
  if (maxval < 1 || maxval > 255) throw IoError("PGM: only 8-bit maxval supported");
  ++pos;  // single whitespace byte after maxval
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() < pos + count) throw IoError("PGM: truncated pixel data");
  std::vector<double> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    pixels[i] = static_cast<unsigned char>(bytes[pos + i]) / static_cast<double>(maxval);
  }
  return GrayImage(width, height, std::move(pixels));
}

GrayImage decode_png(const std::string& bytes) {
  if (!looks_like_png(bytes)) throw IoError("PNG: bad signature");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("PNG: failed to allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("PNG: failed to allocate info struct");
  }

  PngReadState state{&bytes, 0};
  std::vector<unsigned char> data;     // interleaved 8-bit rows
  std::vector<png_bytep> row_pointers;
  png_uint_32 width = 0, height = 0;
  int channels = 0;
  bool failed = false;

  // libpng reports errors via longjmp; everything it may skip over lives
  // above this point.
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_set_read_fn(png, &state, png_read_from_memory);
    png_read_info(png, info);
    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (bit_depth == 16) png_set_strip_16(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    channels = png_get_channels(png, info);
    data.resize(static_cast<std::size_t>(width) * height * channels);
    row_pointers.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
      row_pointers[y] = data.data() + static_cast<std::size_t>(y) * width * channels;
    }
    png_read_image(png, row_pointers.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) throw IoError("PNG: decode error");
  if (channels != 1 && channels != 3) {
    throw IoError("PNG: unsupported channel layout after expansion");
  }

  std::vector<double> pixels(static_cast<std::size_t>(width) * height);
  if (channels == 1) {
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = data[i] / 255.0;
  } else {
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      const double r = data[3 * i + 0];
      const double g = data[3 * i + 1];
      const double b = data[3 * i + 2];
      pixels[i] = std::clamp((0.299 * r + 0.587 * g + 0.114 * b) / 255.0, 0.0, 1.0);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

GrayImage read_image(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (looks_like_png(bytes)) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  throw IoError("unrecognized image format: " + path.string());
}

std::string encode_pgm(const GrayImage& img) {
  std::ostringstream out;
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::string body;
  body.reserve(img.pixels().size());
  for (const double v : img.pixels()) {
    body.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  return out.str() + body;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  atomic_write_file(path, encode_pgm(img));
}

}  // namespace covtrack
