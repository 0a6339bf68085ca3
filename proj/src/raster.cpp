// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sceneedit/error.hpp"

namespace sceneedit {

Raster::Raster(int width, int height, std::uint8_t fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)) * 4, fill) {
  if (width < 0 || height < 0) fail(ErrorCode::ShapeMismatch, "negative raster dimensions");
}

void Raster::fill(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a) {
  for (std::size_t i = 0; i < data_.size(); i += 4) {
    data_[i] = r;
    data_[i + 1] = g;
    data_[i + 2] = b;
    data_[i + 3] = a;
  }
}

std::size_t opaque_pixel_count(const Raster& raster) {
  std::size_t n = 0;
  const auto bytes = raster.bytes();
  for (std::size_t i = 3; i < bytes.size(); i += 4) n += bytes[i] != 0;
  return n;
}

namespace {

std::uint8_t round_channel(double v) {
  v = std::nearbyint(v);  // default rounding mode: half to even
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

}  // namespace

Raster resize_bilinear(const Raster& src, int width, int height) {
  if (src.empty()) fail(ErrorCode::ShapeMismatch, "cannot resize an empty raster");
  if (width <= 0 || height <= 0) fail(ErrorCode::ShapeMismatch, "resize target must be positive");
  Raster out(width, height);
  if (width == src.width() && height == src.height()) {
    out = src;
    return out;
  }
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  const int max_x = src.width() - 1;
  const int max_y = src.height() - 1;

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, max_y);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, max_x);
      const double wx = fx - x0;
      const std::uint8_t* p00 = src.pixel(x0, y0);
      const std::uint8_t* p01 = src.pixel(x1, y0);
      const std::uint8_t* p10 = src.pixel(x0, y1);
      const std::uint8_t* p11 = src.pixel(x1, y1);
      std::uint8_t* dst = out.pixel(x, y);
      for (int c = 0; c < 4; ++c) {
        const double top = p00[c] + (p01[c] - p00[c]) * wx;
        const double bottom = p10[c] + (p11[c] - p10[c]) * wx;
        dst[c] = round_channel(top + (bottom - top) * wy);
      }
    }
  }
  return out;
}

void unpremultiply(Raster& raster) {
  auto bytes = raster.bytes();
  for (std::size_t i = 0; i < bytes.size(); i += 4) {
    const double a = bytes[i + 3];
    if (a == 0.0) continue;
    for (int c = 0; c < 3; ++c) bytes[i + c] = round_channel(bytes[i + c] * 255.0 / a);
  }
}

namespace {

struct PngWriteBuffer {
  std::vector<std::uint8_t>* out;
};

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* buffer = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
  buffer->out->insert(buffer->out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

struct PngReadBuffer {
  std::span<const std::uint8_t> in;
  std::size_t pos = 0;
};

void png_read_from_span(png_structp png, png_bytep data, png_size_t length) {
  auto* buffer = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
  if (buffer->pos + length > buffer->in.size()) png_error(png, "truncated PNG stream");
  std::memcpy(data, buffer->in.data() + buffer->pos, length);
  buffer->pos += length;
}

[[noreturn]] void png_error_handler(png_structp, png_const_charp message) {
  throw Error(ErrorCode::IoFailure, std::string("png: ") + message);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const Raster& raster) {
  if (raster.empty()) fail(ErrorCode::IoFailure, "cannot encode an empty raster");
  std::vector<std::uint8_t> out;
  PngWriteBuffer buffer{&out};
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                            png_warning_handler);
  if (!png) fail(ErrorCode::IoFailure, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(static_cast<std::size_t>(raster.height()));
  try {
    if (!info) fail(ErrorCode::IoFailure, "png_create_info_struct failed");
    png_set_write_fn(png, &buffer, png_write_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width()), static_cast<png_uint_32>(raster.height()),
                 8, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
    png_write_info(png, info);
    for (int y = 0; y < raster.height(); ++y) {
      rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(raster.pixel(0, y));
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

Raster decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    fail(ErrorCode::IoFailure, "not a PNG stream");
  }
  PngReadBuffer buffer{bytes, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                           png_warning_handler);
  if (!png) fail(ErrorCode::IoFailure, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  Raster out;
  try {
    if (!info) fail(ErrorCode::IoFailure, "png_create_info_struct failed");
    png_set_read_fn(png, &buffer, png_read_from_span);
    png_read_info(png, info);
    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_PALETTE) {
      png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 4) {
      fail(ErrorCode::IoFailure, "unsupported PNG layout");
    }
    out = Raster(static_cast<int>(width), static_cast<int>(height));
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = out.pixel(0, static_cast<int>(y));
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoFailure, "short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

void write_png(const std::filesystem::path& path, const Raster& raster) {
  write_file_bytes(path, encode_png(raster));
}

Raster read_png(const std::filesystem::path& path) { return decode_png(read_file_bytes(path)); }

}  // namespace sceneedit
