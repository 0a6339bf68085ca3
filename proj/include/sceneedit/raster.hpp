// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sceneedit {

/// Straight-alpha RGBA, 8 bits per channel, row-major, top-left origin.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, std::uint8_t fill = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  std::uint8_t* pixel(int x, int y) { return &data_[offset(x, y)]; }
  const std::uint8_t* pixel(int x, int y) const { return &data_[offset(x, y)]; }

  std::span<std::uint8_t> bytes() { return data_; }
  std::span<const std::uint8_t> bytes() const { return data_; }

  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a);

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 4;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Count of pixels with nonzero alpha.
std::size_t opaque_pixel_count(const Raster& raster);

/// Bilinear resample of all four straight-alpha channels to `width`×`height`.
/// Sample positions are pixel-center aligned with edge clamping; results are
/// rounded half-to-even.
Raster resize_bilinear(const Raster& src, int width, int height);

/// Converts premultiplied RGBA in place to straight alpha.
void unpremultiply(Raster& raster);

// PNG I/O. Output is 8-bit RGBA, non-interlaced, fixed zlib settings so that
// identical rasters always encode to identical bytes.
std::vector<std::uint8_t> encode_png(const Raster& raster);
Raster decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::filesystem::path& path, const Raster& raster);
Raster read_png(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sceneedit
