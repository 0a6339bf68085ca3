// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/render_real.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sceneedit/error.hpp"

namespace sceneedit {

SizeConfig SizeConfig::for_canvas(int width, int height, const TransitionLimits& limits) {
  const double l = std::min(width, height);
  SizeConfig cfg;
  cfg.depth_min = limits.depth_min;
  cfg.depth_max = limits.depth_max;
  cfg.base_size_min = l / 20.0;
  cfg.base_size_max = l / 4.0;
  cfg.scale_min = limits.scale_min;
  cfg.scale_max = limits.scale_max;
  return cfg;
}

double compute_object_size(double depth, double scale, const SizeConfig& cfg) {
  if (!(depth >= cfg.depth_min && depth <= cfg.depth_max)) {
    fail(ErrorCode::BoundViolation, "depth " + std::to_string(depth) + " outside [" +
                                        std::to_string(cfg.depth_min) + ", " + std::to_string(cfg.depth_max) + "]");
  }
  if (!(scale >= cfg.scale_min && scale <= cfg.scale_max)) {
    fail(ErrorCode::BoundViolation, "scale factor " + std::to_string(scale) + " outside [" +
                                        std::to_string(cfg.scale_min) + ", " + std::to_string(cfg.scale_max) + "]");
  }
  const double s_min = cfg.base_size_min * scale;
  const double s_max = cfg.base_size_max * scale;
  return (depth - cfg.depth_max) * (s_min - s_max) / (cfg.depth_max - cfg.depth_min) + s_min;
}

PlacedLayer rasterize_layer(const ObjectAsset& asset, const ObjectInstance& instance, int canvas_width,
                            int canvas_height, const SizeConfig& cfg) {
  if (asset.kind != AssetKind::Layer2d || !instance.is_layer()) {
    fail(ErrorCode::IllegalKindForDomain, "rasterize_layer needs a layer2d asset and pose");
  }
  const LayerPose& pose = instance.layer();
  const double size = compute_object_size(pose.depth, instance.scale, cfg);
  if (size < 1.0) {
    fail(ErrorCode::SubpixelSize, "instance '" + instance.instance_id + "' would be " + std::to_string(size) + " px");
  }
  const double shortest = std::min(asset.layer.width(), asset.layer.height());
  const double factor = size / shortest;
  const int w = std::max(1, static_cast<int>(std::nearbyint(asset.layer.width() * factor)));
  const int h = std::max(1, static_cast<int>(std::nearbyint(asset.layer.height() * factor)));

  PlacedLayer placed;
  placed.layer = resize_bilinear(asset.layer, w, h);
  placed.origin_x = static_cast<int>(std::nearbyint(pose.center_px.x - w / 2.0));
  placed.origin_y = static_cast<int>(std::nearbyint(pose.center_px.y - h / 2.0));
  placed.bbox = {placed.origin_x, placed.origin_y, placed.origin_x + w, placed.origin_y + h};
  placed.clipped_bbox = intersect(placed.bbox, {0, 0, canvas_width, canvas_height});

  int x0 = w, y0 = h, x1 = 0, y1 = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (placed.layer.pixel(x, y)[3] == 0) continue;
      ++placed.opaque_pixels;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x + 1);
      y1 = std::max(y1, y + 1);
    }
  }
  if (placed.opaque_pixels > 0) {
    placed.footprint = {placed.origin_x + x0, placed.origin_y + y0, placed.origin_x + x1, placed.origin_y + y1};
  }
  return placed;
}

Raster prepare_background(const SceneState& state, const AssetStore& assets) {
  const ObjectAsset& bg = assets.at(state.background_id);
  if (bg.kind != AssetKind::Layer2d) fail(ErrorCode::MissingAsset, "background must be a layer2d asset");
  if (bg.layer.width() == state.width && bg.layer.height() == state.height) return bg.layer;
  return resize_bilinear(bg.layer, state.width, state.height);
}

std::vector<std::size_t> painter_order(const SceneState& state) {
  std::vector<std::size_t> order(state.objects.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.objects[a].layer().depth > state.objects[b].layer().depth;
  });
  return order;
}

void store_accumulator(const double acc[4], std::uint8_t* dst) {
  const double alpha = acc[3];
  if (alpha <= 0.0) {
    dst[0] = dst[1] = dst[2] = dst[3] = 0;
    return;
  }
  const double inv = 255.0 / alpha;
  for (int c = 0; c < 3; ++c) dst[c] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(acc[c] * inv), 0.0, 255.0));
  dst[3] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(alpha), 0.0, 255.0));
}

namespace {

constexpr int kNoOwner = -1;

// Shared annotation pass: `owner` holds, per canvas pixel, the painter-order
// position of the topmost layer with nonzero alpha.
std::vector<Annotation> annotate(const SceneState& state, const std::vector<PlacedLayer>& layers,
                                 const std::vector<std::size_t>& order, const std::vector<int>& owner) {
  const std::size_t n = state.objects.size();
  std::vector<std::size_t> visible(n, 0);
  for (int v : owner)
    if (v != kNoOwner) ++visible[order[static_cast<std::size_t>(v)]];

  std::vector<Annotation> out(n);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    const PlacedLayer& layer = layers[i];
    Annotation& a = out[i];
    a.instance_id = state.objects[i].instance_id;
    a.full_bbox_px = to_boxd(layer.footprint);
    a.bbox_px = to_boxd(intersect(layer.footprint, {0, 0, state.width, state.height}));
    a.centroid_px = {(a.full_bbox_px.x0 + a.full_bbox_px.x1) * 0.5, (a.full_bbox_px.y0 + a.full_bbox_px.y1) * 0.5};
    a.visible_fraction =
        layer.opaque_pixels == 0 ? 0.0 : static_cast<double>(visible[i]) / static_cast<double>(layer.opaque_pixels);
    a.depth_rank = static_cast<int>(order.size() - 1 - pos);
  }
  return out;
}

void check_inputs(const SceneState& state, const Raster& background, const std::vector<PlacedLayer>& layers) {
  if (background.width() != state.width || background.height() != state.height) {
    fail(ErrorCode::ShapeMismatch, "background does not match the canvas");
  }
  if (layers.size() != state.objects.size()) fail(ErrorCode::ShapeMismatch, "one layer per instance required");
}

}  // namespace

Observation composite_layers(const SceneState& state, const Raster& background,
                             const std::vector<PlacedLayer>& layers) {
  check_inputs(state, background, layers);
  const auto order = painter_order(state);
  const int width = state.width;
  const int height = state.height;
  Observation obs;
  obs.image = Raster(width, height);
  std::vector<int> owner(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), kNoOwner);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc[4];
      load_accumulator(acc, background.pixel(x, y));
      int top = kNoOwner;
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const PlacedLayer& layer = layers[order[pos]];
        const PixelBox& box = layer.clipped_bbox;
        if (x < box.x0 || x >= box.x1 || y < box.y0 || y >= box.y1) continue;
        const std::uint8_t* src = layer.layer.pixel(x - layer.origin_x, y - layer.origin_y);
        if (src[3] == 0) continue;
        blend_over(acc, src);
        top = static_cast<int>(pos);
      }
      store_accumulator(acc, obs.image.pixel(x, y));
      owner[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = top;
    }
  }
  obs.annotations = annotate(state, layers, order, owner);
  return obs;
}

namespace reference {

Observation composite_layers(const SceneState& state, const Raster& background,
                             const std::vector<PlacedLayer>& layers) {
  check_inputs(state, background, layers);
  const auto order = painter_order(state);
  const int width = state.width;
  const int height = state.height;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> acc(count * 4);
  std::vector<int> owner(count, kNoOwner);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      load_accumulator(&acc[(static_cast<std::size_t>(y) * width + x) * 4], background.pixel(x, y));

  // Background first, then every layer from farthest to nearest.
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const PlacedLayer& layer = layers[order[pos]];
    const PixelBox& box = layer.clipped_bbox;
    for (int y = box.y0; y < box.y1; ++y) {
      for (int x = box.x0; x < box.x1; ++x) {
        const std::uint8_t* src = layer.layer.pixel(x - layer.origin_x, y - layer.origin_y);
        if (src[3] == 0) continue;
        const std::size_t idx = static_cast<std::size_t>(y) * width + x;
        blend_over(&acc[idx * 4], src);
        owner[idx] = static_cast<int>(pos);
      }
    }
  }

  Observation obs;
  obs.image = Raster(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      store_accumulator(&acc[(static_cast<std::size_t>(y) * width + x) * 4], obs.image.pixel(x, y));
  obs.annotations = annotate(state, layers, order, owner);
  return obs;
}

}  // namespace reference

Observation composite(const SceneState& state, const AssetStore& assets) {
  if (state.domain != Domain::Real) fail(ErrorCode::IllegalKindForDomain, "composite renders the realistic domain");
  const SizeConfig cfg = SizeConfig::for_canvas(state.width, state.height);
  std::vector<PlacedLayer> layers;
  layers.reserve(state.objects.size());
  for (const auto& inst : state.objects) {
    layers.push_back(rasterize_layer(assets.at(inst.asset_id), inst, state.width, state.height, cfg));
  }
  return composite_layers(state, prepare_background(state, assets), layers);
}

}  // namespace sceneedit
