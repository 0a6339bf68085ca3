// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/geometry.hpp"

#include "sceneedit/error.hpp"

namespace sceneedit {

Mask box_coverage_mask(const NormBox& box, int height, int width) {
  if (height <= 0 || width <= 0) fail(ErrorCode::ShapeMismatch, "mask grid must be positive");
  Mask mask(height, width);
  for (int y = 0; y < height; ++y) {
    const double v = (y + 0.5) / height;
    if (v < box.v0 || v > box.v1) continue;
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5) / width;
      if (u >= box.u0 && u <= box.u1) mask.at(y, x) = 1;
    }
  }
  return mask;
}

Mask downsample_mask(const Mask& mask, int height, int width) {
  if (height <= 0 || width <= 0 || mask.height <= 0 || mask.width <= 0) {
    fail(ErrorCode::ShapeMismatch, "mask grid must be positive");
  }
  Mask out(height, width);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * mask.height / height), mask.height - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * mask.width / width), mask.width - 1);
      out.at(y, x) = mask.at(sy, sx);
    }
  }
  return out;
}

}  // namespace sceneedit
