// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "compositing_oracle.hpp"
#include "sceneedit/error.hpp"
#include "sceneedit/render_real.hpp"
#include "support.hpp"

using namespace sceneedit;
using namespace sceneedit::testing;

TEST_CASE("depth to size law") {
  const SizeConfig cfg = SizeConfig::for_canvas(512, 512);
  CHECK(compute_object_size(200, 1, cfg) == doctest::Approx(25.6).epsilon(1e-12));
  CHECK(compute_object_size(10, 1, cfg) == doctest::Approx(128).epsilon(1e-12));
  CHECK(compute_object_size(105, 1, cfg) == doctest::Approx(76.8).epsilon(1e-12));
  CHECK(compute_object_size(200, 2, cfg) == doctest::Approx(51.2).epsilon(1e-12));
  // Midpoint of the linear map, computed independently.
  CHECK(compute_object_size(105, 1, cfg) == doctest::Approx((512.0 / 20 + 512.0 / 4) / 2).epsilon(1e-12));
}

TEST_CASE("size decreases with depth") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const SizeConfig cfg = SizeConfig::for_canvas(static_cast<int>(rng.uniform_int(16, 2048)),
                                                  static_cast<int>(rng.uniform_int(16, 2048)));
    const double fs = rng.uniform(0.2, 4);
    double d1 = rng.uniform(10, 200), d2 = rng.uniform(10, 200);
    if (d1 == d2) continue;
    if (d1 > d2) std::swap(d1, d2);
    CHECK(compute_object_size(d1, fs, cfg) > compute_object_size(d2, fs, cfg));
  }
}

TEST_CASE("layer placement") {
  AssetStore assets;
  assets.add({"sq", AssetKind::Layer2d, Raster(100, 100, 255), false, {}, {}});
  assets.add({"wide", AssetKind::Layer2d, Raster(200, 100, 255), false, {}, {}});
  const SizeConfig cfg = SizeConfig::for_canvas(512, 512);
  // size 50 ⇔ depth where 50 = (d − 200)(25.6 − 128)/190 + 25.6
  const double d50 = 200.0 - (50.0 - 25.6) * 190.0 / (128.0 - 25.6);
  CHECK(compute_object_size(d50, 1, cfg) == doctest::Approx(50).epsilon(1e-12));

  const PlacedLayer sq = rasterize_layer(assets.at("sq"), {"a", "sq", 1, LayerPose{{256, 256}, d50}}, 512, 512, cfg);
  CHECK(sq.layer.width() == 50);
  CHECK(sq.layer.height() == 50);
  const PlacedLayer wide = rasterize_layer(assets.at("wide"), {"b", "wide", 1, LayerPose{{0, 0}, d50}}, 512, 512, cfg);
  CHECK(wide.layer.width() == 100);
  CHECK(wide.layer.height() == 50);
  CHECK(wide.bbox.x0 < 0);
  CHECK(wide.bbox.y0 < 0);
  CHECK(wide.clipped_bbox.x0 == 0);
}

TEST_CASE("painter order on a 16x16 canvas") {
  AssetStore assets;
  Raster red(8, 8), blue(8, 8);
  red.fill(255, 0, 0, 255);
  blue.fill(0, 0, 255, 255);
  assets.add({"bg", AssetKind::Layer2d, Raster(16, 16, 255), false, {}, {}});
  assets.add({"red", AssetKind::Layer2d, red, false, {}, {}});
  assets.add({"blue", AssetKind::Layer2d, blue, false, {}, {}});
  SceneState s;
  s.domain = Domain::Real;
  s.background_id = "bg";
  s.width = s.height = 16;
  // Size at depth 10 is 4 px, at 200 it is 0.8 px; scale up to stay visible.
  s.objects = {{"near", "red", 2.0, LayerPose{{8, 8}, 50}}, {"far", "blue", 4.0, LayerPose{{9, 9}, 150}}};
  const Observation obs = composite(s, assets);
  const auto* center = obs.image.pixel(8, 8);
  CHECK(center[0] == 255);
  CHECK(center[2] == 0);
  CHECK(obs.find("near")->visible_fraction == 1.0);
  CHECK(obs.find("near")->depth_rank == 0);
  CHECK(obs.find("far")->depth_rank == 1);
  CHECK(obs.find("far")->visible_fraction < 1.0);

  SUBCASE("equal depth: later insertion on top") {
    s.objects[1].layer().depth = 50;
    s.objects[1].scale = 2.0;
    const Observation tie = composite(s, assets);
    CHECK(tie.image.pixel(8, 8)[2] == 255);
  }
}

TEST_CASE("transparent layers and empty scenes leave the background") {
  const AssetStore& demo = demo_assets();
  SceneState s;
  s.domain = Domain::Real;
  s.background_id = "background_1";
  s.width = s.height = 64;
  const Observation empty = composite(s, demo);
  CHECK(empty.image == demo.at("background_1").layer);
  CHECK(empty.annotations.empty());

  // A layer with no opaque pixels contributes nothing.
  s.objects = {{"g", "ellipse", 1.0, LayerPose{{32, 32}, 50}}};
  PlacedLayer ghost;
  ghost.layer = Raster(8, 8, 0);
  ghost.origin_x = 28;
  ghost.origin_y = 28;
  const Raster bg = prepare_background(s, demo);
  const Observation obs = composite_layers(s, bg, {ghost});
  CHECK(obs.image == bg);
  CHECK(obs == reference::composite_layers(s, bg, {ghost}));
}

TEST_CASE("compositor matches the per-pixel painter oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    auto [scene, assets] = random_composite_scene(rng);
    const Observation obs = composite(scene, assets);
    const auto layers = place_all(scene, assets);
    const OracleResult oracle = painter_oracle(scene, prepare_background(scene, assets), layers);
    REQUIRE(obs.image == oracle.image);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      CHECK(obs.annotations[i].visible_fraction == oracle.visible_fraction[i]);
    }
    CHECK(reference::composite_layers(scene, prepare_background(scene, assets), layers) == obs);
  }
}

TEST_CASE("rendering is deterministic and annotates every object") {
  const AssetStore& assets = demo_assets();
  SceneState s;
  s.domain = Domain::Real;
  s.background_id = "background_2";
  s.width = s.height = 64;
  s.objects = {{"a", "ellipse", 1.0, LayerPose{{20, 20}, 40}},
               {"b", "capsule", 1.5, LayerPose{{40, 30}, 90}},
               {"c", "tall_bar", 2.0, LayerPose{{30, 50}, 150}}};
  const Observation a = composite(s, assets);
  const Observation b = composite(s, assets);
  CHECK(a == b);
  CHECK(a.annotations.size() == 3);
  CHECK(a.find("a")->visible_fraction == 1.0);  // nearest and fully on-canvas
  for (const auto& ann : a.annotations) {
    CHECK(ann.bbox_px.x0 >= 0);
    CHECK(ann.full_bbox_px.x0 <= ann.bbox_px.x0);
  }
}
