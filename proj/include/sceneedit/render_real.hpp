// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "sceneedit/scene.hpp"

namespace sceneedit {

/// Depth and size bounds of the realistic domain. Size bounds are in pixels
/// and derive from the canvas shortest side l as l/20 and l/4.
struct SizeConfig {
  double depth_min = 10.0;
  double depth_max = 200.0;
  double base_size_min = 0.0;
  double base_size_max = 0.0;
  double scale_min = 0.2;
  double scale_max = 4.0;

  static SizeConfig for_canvas(int width, int height, const TransitionLimits& limits = {});
};

/// Shortest-side length in pixels of an object at depth `depth` with scale
/// factor `scale`: a linear map from [d_min, d_max] onto [s_max, s_min] with
/// s = ŝ·f_s. Throws BoundViolation outside the configured bounds.
double compute_object_size(double depth, double scale, const SizeConfig& cfg);

/// A resized object layer positioned on the canvas.
struct PlacedLayer {
  Raster layer;
  int origin_x = 0;  // canvas coordinates of layer pixel (0, 0)
  int origin_y = 0;
  PixelBox bbox;          // unclipped layer rectangle
  PixelBox clipped_bbox;  // bbox ∩ canvas
  PixelBox footprint;     // tight box of alpha > 0 pixels, unclipped
  std::size_t opaque_pixels = 0;
};

/// Resizes the asset so its shortest side equals the computed size and
/// centers it on the instance position. Throws SubpixelSize if below 1 px.
PlacedLayer rasterize_layer(const ObjectAsset& asset, const ObjectInstance& instance,
                            int canvas_width, int canvas_height, const SizeConfig& cfg);

/// Background asset resized (when needed) to the canvas.
Raster prepare_background(const SceneState& state, const AssetStore& assets);

/// Instance indices in painter order: farthest first, and among equal depths
/// earlier-inserted first so later insertions land on top.
std::vector<std::size_t> painter_order(const SceneState& state);

/// Painter's-algorithm compositor, rows processed in parallel.
Observation composite(const SceneState& state, const AssetStore& assets);

/// Lower-level entry point used by the compositor and its reference twin.
/// `layers` is indexed like state.objects.
Observation composite_layers(const SceneState& state, const Raster& background,
                             const std::vector<PlacedLayer>& layers);

namespace reference {
/// Single-threaded layer-at-a-time painter, kept as the ground truth for the
/// parallel compositor.
Observation composite_layers(const SceneState& state, const Raster& background,
                             const std::vector<PlacedLayer>& layers);
}  // namespace reference

/// Source-over blend of a straight-alpha 8-bit pixel onto a float
/// premultiplied accumulator (rgb premultiplied, alpha), all in [0, 255].
inline void blend_over(double acc[4], const std::uint8_t* src) {
  const double a = src[3] / 255.0;
  if (a <= 0.0) return;
  const double keep = 1.0 - a;
  acc[0] = src[0] * a + acc[0] * keep;
  acc[1] = src[1] * a + acc[1] * keep;
  acc[2] = src[2] * a + acc[2] * keep;
  acc[3] = src[3] + acc[3] * keep;
}

/// Loads a straight-alpha 8-bit pixel into a premultiplied accumulator.
inline void load_accumulator(double acc[4], const std::uint8_t* src) {
  const double a = src[3] / 255.0;
  acc[0] = src[0] * a;
  acc[1] = src[1] * a;
  acc[2] = src[2] * a;
  acc[3] = src[3];
}

/// Un-premultiplies and rounds half-to-even into an 8-bit pixel.
void store_accumulator(const double acc[4], std::uint8_t* dst);

}  // namespace sceneedit
