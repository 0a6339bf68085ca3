// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

// Per-pixel painter oracle: for each pixel, gather the layers covering it,
// sort them far-to-near (ties: insertion order), and blend.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sceneedit/render_real.hpp"
#include "sceneedit/rng.hpp"
#include "support.hpp"

namespace sceneedit::testing {

struct OracleResult {
  Raster image;
  std::vector<double> visible_fraction;
};

inline OracleResult painter_oracle(const SceneState& state, const Raster& background,
                                   const std::vector<PlacedLayer>& layers) {
  OracleResult out{Raster(state.width, state.height), std::vector<double>(layers.size(), 0.0)};
  std::vector<std::size_t> topmost(layers.size(), 0);
  struct Hit {
    double depth;
    std::size_t index;
    const std::uint8_t* px;
  };
  for (int y = 0; y < state.height; ++y) {
    for (int x = 0; x < state.width; ++x) {
      std::vector<Hit> hits;
      for (std::size_t i = 0; i < layers.size(); ++i) {
        const PlacedLayer& l = layers[i];
        const int lx = x - l.origin_x;
        const int ly = y - l.origin_y;
        if (lx < 0 || ly < 0 || lx >= l.layer.width() || ly >= l.layer.height()) continue;
        const std::uint8_t* px = l.layer.pixel(lx, ly);
        if (px[3] == 0) continue;
        hits.push_back({state.objects[i].layer().depth, i, px});
      }
      std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.depth != b.depth ? a.depth > b.depth : a.index < b.index;
      });
      const std::uint8_t* bg = background.pixel(x, y);
      double ab = bg[3] / 255.0;
      double r = bg[0] * ab, g = bg[1] * ab, b = bg[2] * ab, a = bg[3];
      for (const Hit& h : hits) {
        const double s = h.px[3] / 255.0;
        r = h.px[0] * s + r * (1.0 - s);
        g = h.px[1] * s + g * (1.0 - s);
        b = h.px[2] * s + b * (1.0 - s);
        a = h.px[3] + a * (1.0 - s);
      }
      std::uint8_t* dst = out.image.pixel(x, y);
      if (a > 0.0) {
        const double k = 255.0 / a;
        dst[0] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(r * k), 0.0, 255.0));
        dst[1] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(g * k), 0.0, 255.0));
        dst[2] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(b * k), 0.0, 255.0));
        dst[3] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(a), 0.0, 255.0));
      }
      if (!hits.empty()) ++topmost[hits.back().index];
    }
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    out.visible_fraction[i] =
        layers[i].opaque_pixels == 0 ? 0.0 : double(topmost[i]) / double(layers[i].opaque_pixels);
  }
  return out;
}

/// Random small scene over random layer assets; canvas at most 32².
inline std::pair<SceneState, AssetStore> random_composite_scene(Rng& rng) {
  AssetStore assets;
  SceneState s;
  s.domain = Domain::Real;
  s.width = static_cast<int>(rng.uniform_int(4, 32));
  s.height = static_cast<int>(rng.uniform_int(4, 32));
  s.background_id = "bg";
  Raster bg = random_layer(rng, s.width, s.height);
  bg.pixel(0, 0)[3] = 255;
  assets.add({"bg", AssetKind::Layer2d, bg, false, {}, {"background"}});
  const int count = static_cast<int>(rng.uniform_int(0, 5));
  for (int i = 0; i < count; ++i) {
    const std::string id = "layer" + std::to_string(i);
    Raster layer = random_layer(rng, static_cast<int>(rng.uniform_int(2, 24)), static_cast<int>(rng.uniform_int(2, 24)));
    layer.pixel(0, 0)[3] = 255;
    assets.add({id, AssetKind::Layer2d, layer, false, {}, {"object"}});
    // Few distinct depths so ties are exercised.
    const SizeConfig cfg = SizeConfig::for_canvas(s.width, s.height);
    double depth = 0, scale = 0;
    do {
      depth = 10.0 + 10.0 * static_cast<double>(rng.uniform_int(0, 4));
      scale = rng.uniform(0.2, 4.0);
    } while (compute_object_size(depth, scale, cfg) < 1.0);
    s.objects.push_back({"o" + std::to_string(i), id, scale,
                         LayerPose{{rng.uniform(0, s.width), rng.uniform(0, s.height)}, depth}});
  }
  return {s, std::move(assets)};
}

inline std::vector<PlacedLayer> place_all(const SceneState& s, const AssetStore& assets) {
  std::vector<PlacedLayer> layers;
  const SizeConfig cfg = SizeConfig::for_canvas(s.width, s.height);
  for (const auto& inst : s.objects) layers.push_back(rasterize_layer(assets.at(inst.asset_id), inst, s.width, s.height, cfg));
  return layers;
}

}  // namespace sceneedit::testing
