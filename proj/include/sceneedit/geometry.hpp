// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sceneedit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v * (1.0 / norm(v)); }

/// Row-major 3×3.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 3 + c)]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(r, k) * o(k, c);
        out(r, c) = s;
      }
    return out;
  }
  Mat3 transposed() const {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
    return out;
  }
};

/// Half-open integer pixel rectangle [x0, x1) × [y0, y1); may extend off-canvas.
struct PixelBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool empty() const { return x1 <= x0 || y1 <= y0; }
  long long area() const { return empty() ? 0 : 1LL * (x1 - x0) * (y1 - y0); }
  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

inline PixelBox intersect(const PixelBox& a, const PixelBox& b) {
  PixelBox r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
  if (r.empty()) return {0, 0, 0, 0};
  return r;
}

/// Real-valued pixel-space box (x0, y0, x1, y1).
struct BoxD {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  friend bool operator==(const BoxD&, const BoxD&) = default;
};

inline BoxD to_boxd(const PixelBox& b) { return {double(b.x0), double(b.y0), double(b.x1), double(b.y1)}; }

/// Canvas-normalized point: u = x / width, v = y / height, origin top-left.
struct NormPoint {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const NormPoint&, const NormPoint&) = default;
};

/// Canvas-normalized box (u0, v0, u1, v1); values may fall outside [0, 1].
struct NormBox {
  double u0 = 0.0;
  double v0 = 0.0;
  double u1 = 0.0;
  double v1 = 0.0;

  NormPoint center() const { return {(u0 + u1) * 0.5, (v0 + v1) * 0.5}; }
  bool contains(const NormPoint& p) const { return p.u >= u0 && p.u <= u1 && p.v >= v0 && p.v <= v1; }
  friend bool operator==(const NormBox&, const NormBox&) = default;
};

inline NormBox normalize_box(const BoxD& b, int width, int height) {
  return {b.x0 / width, b.y0 / height, b.x1 / width, b.y1 / height};
}

/// Binary mask on an h×w grid, row-major.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> cells;

  Mask() = default;
  Mask(int h, int w, std::uint8_t value = 0)
      : height(h), width(w), cells(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), value) {}

  std::uint8_t at(int y, int x) const { return cells[static_cast<std::size_t>(y * width + x)]; }
  std::uint8_t& at(int y, int x) { return cells[static_cast<std::size_t>(y * width + x)]; }
  std::size_t size() const { return cells.size(); }
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
  }
  friend bool operator==(const Mask&, const Mask&) = default;
};

/// Rasterizes a normalized box onto an h×w grid: a cell is set iff its center
/// ((x + 0.5) / w, (y + 0.5) / h) lies inside the closed box.
Mask box_coverage_mask(const NormBox& box, int height, int width);

/// Resamples a fine binary mask onto a coarser grid by sampling the source
/// cell under each destination cell center.
Mask downsample_mask(const Mask& mask, int height, int width);

}  // namespace sceneedit
