// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "sceneedit/error.hpp"
#include "sceneedit/geometry.hpp"
#include "sceneedit/render_real.hpp"
#include "sceneedit/scene.hpp"
#include "sceneedit/serialization.hpp"
#include "support.hpp"

using namespace sceneedit;
using namespace sceneedit::testing;

namespace {

SceneState real_scene(double cx = 32, double cy = 32, double depth = 100) {
  SceneState s;
  s.domain = Domain::Real;
  s.background_id = "background_0";
  s.width = 64;
  s.height = 64;
  ObjectInstance a{"a", "ellipse", 1.0, LayerPose{{cx, cy}, depth}};
  ObjectInstance b{"b", "ring", 1.0, LayerPose{{20, 40}, 60}};
  s.objects = {a, b};
  return s;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("error codes carry their names") {
  CHECK(error_code_name(ErrorCode::BoundViolation) == "BoundViolation");
  CHECK(error_code_name(ErrorCode::UnknownSession) == "UnknownSession");
  const Error e(ErrorCode::IllegalKindForDomain, "x");
  CHECK(e.code_name() == "IllegalKindForDomain");
}

TEST_CASE("rng conversions stay in range and repeat per seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform(-3, 5);
    CHECK(u == b.uniform(-3, 5));
    CHECK(u >= -3);
    CHECK(u <= 5);
    const auto k = a.uniform_int(2, 6);
    CHECK(k == b.uniform_int(2, 6));
    CHECK(k >= 2);
    CHECK(k <= 6);
    const double l = a.log_uniform(0.2, 4);
    CHECK(l == b.log_uniform(0.2, 4));
    CHECK(l >= 0.2 - 1e-12);
    CHECK(l <= 4 + 1e-12);
  }
}

TEST_CASE("box coverage uses cell centers") {
  const Mask m = box_coverage_mask({0.25, 0.25, 0.5, 0.5}, 4, 4);
  CHECK(m.count() == 1);
  CHECK(m.at(1, 1) == 1);
  CHECK(box_coverage_mask({0, 0, 1, 1}, 5, 7).count() == 35);

  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const int h = static_cast<int>(rng.uniform_int(1, 12));
    const int w = static_cast<int>(rng.uniform_int(1, 12));
    double u0 = rng.uniform(-0.2, 1.2), u1 = rng.uniform(-0.2, 1.2);
    double v0 = rng.uniform(-0.2, 1.2), v1 = rng.uniform(-0.2, 1.2);
    if (u0 > u1) std::swap(u0, u1);
    if (v0 > v1) std::swap(v0, v1);
    std::size_t expected = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double cu = (2.0 * x + 1.0) / (2.0 * w);
        const double cv = (2.0 * y + 1.0) / (2.0 * h);
        expected += (cu >= u0 && cu <= u1 && cv >= v0 && cv <= v1) ? 1 : 0;
      }
    }
    CHECK(box_coverage_mask({u0, v0, u1, v1}, h, w).count() == expected);
  }
}

TEST_CASE("real-domain transitions") {
  const AssetStore& assets = demo_assets();
  const SceneState s = real_scene();

  SUBCASE("identity translation only advances the round") {
    const SceneState n = apply_operation(s, {"a", OpKind::T, {0, 0, 0}}, assets);
    CHECK(n.objects == s.objects);
    CHECK(n.round == s.round + 1);
  }
  SUBCASE("scale by two") {
    const SceneState n = apply_operation(s, {"a", OpKind::S, {2}}, assets);
    CHECK(n.find("a")->scale == 2.0);
    CHECK(n.find("a")->layer() == s.find("a")->layer());
    CHECK(*n.find("b") == *s.find("b"));
  }
  SUBCASE("scale past the upper bound") {
    CHECK(code_of([&] { apply_operation(s, {"a", OpKind::S, {5}}, assets); }) == ErrorCode::BoundViolation);
  }
  SUBCASE("depth and centroid bounds") {
    CHECK(code_of([&] { apply_operation(s, {"a", OpKind::T, {0, 0, 150}}, assets); }) == ErrorCode::BoundViolation);
    CHECK(code_of([&] { apply_operation(s, {"a", OpKind::T, {40, 0, 0}}, assets); }) == ErrorCode::BoundViolation);
    CHECK_NOTHROW(apply_operation(s, {"a", OpKind::T, {32, -32, 0}}, assets));
  }
  SUBCASE("illegal commands") {
    CHECK(code_of([&] { apply_operation(s, {"a", OpKind::X, {10}}, assets); }) == ErrorCode::IllegalKindForDomain);
    CHECK(code_of([&] { apply_operation(s, {"zz", OpKind::T, {0, 0, 0}}, assets); }) == ErrorCode::UnknownInstance);
    CHECK(code_of([&] { apply_operation(s, {"a", OpKind::T, {1, 2}}, assets); }) == ErrorCode::IllegalCommand);
  }
  SUBCASE("input is never mutated and inverses cancel") {
    const SceneState copy = s;
    const SceneState moved = apply_operation(s, {"a", OpKind::T, {7.25, -3.5, 12.75}}, assets);
    CHECK(s == copy);
    const SceneState back = apply_operation(moved, {"a", OpKind::T, {-7.25, 3.5, -12.75}}, assets);
    CHECK(back.find("a")->layer().center_px.x == doctest::Approx(32).epsilon(1e-12));
    CHECK(back.find("a")->layer().depth == doctest::Approx(100).epsilon(1e-12));
  }
}

TEST_CASE("random legal command sequences keep states valid") {
  const AssetStore& assets = demo_assets();
  Rng rng(3);
  SceneState s = real_scene();
  int applied = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string id = rng.uniform01() < 0.5 ? "a" : "b";
    OperationCommand cmd = rng.uniform01() < 0.5
                               ? OperationCommand{id, OpKind::T, {rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-30, 30)}}
                               : OperationCommand{id, OpKind::S, {rng.log_uniform(0.5, 2)}};
    try {
      s = apply_operation(s, cmd, assets);
      ++applied;
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::BoundViolation);
      continue;
    }
    REQUIRE(validate_state(s, assets).empty());
  }
  CHECK(applied > 5000);
  CHECK(s.round == applied);
}

TEST_CASE("source regions") {
  AssetStore assets;
  ObjectAsset bg{"bg", AssetKind::Layer2d, Raster(512, 512, 255), false, {}, {"background"}};
  ObjectAsset square{"sq", AssetKind::Layer2d, Raster(128, 128, 255), false, {}, {"object"}};
  assets.add(bg);
  assets.add(square);
  SceneState s;
  s.domain = Domain::Real;
  s.background_id = "bg";
  s.width = s.height = 512;
  // d = 10 gives size 128 at f_s = 1, so the layer keeps its native size.
  s.objects = {{"o", "sq", 1.0, LayerPose{{192, 192}, 10}}};

  const SourceRegion r = derive_source_region(s, "o", assets);
  CHECK(r.bbox == NormBox{0.25, 0.25, 0.5, 0.5});
  CHECK(r.centroid.u == 0.375);
  CHECK(r.centroid.v == 0.375);

  s.objects[0].layer().center_px = {256, 256};
  CHECK(derive_source_region(s, "o", assets).centroid.u == 0.5);

  s.objects[0].layer().center_px = {10, 256};
  const SourceRegion off = derive_source_region(s, "o", assets);
  CHECK(off.bbox.u0 < 0);
  CHECK(off.bbox.contains(off.centroid));
}

TEST_CASE("target masks") {
  const AssetStore& assets = demo_assets();
  const SceneState s = real_scene();
  CHECK(derive_target_mask(s, "a", 8, 8, assets, true).count() == 0);
  SceneState big = s;
  big.find("a")->scale = 4.0;
  big.find("a")->layer().depth = 10;
  CHECK(derive_target_mask(big, "a", 6, 6, assets).count() == 36);
}

TEST_CASE("assets") {
  const AssetStore& assets = demo_assets();
  CHECK(assets.at("ellipse").kind == AssetKind::Layer2d);
  CHECK(assets.at("box_unit").kind == AssetKind::Box3d);
  CHECK(code_of([&] { (void)assets.at("nope"); }) == ErrorCode::MissingAsset);

  AssetStore store;
  store.add({"x", AssetKind::Layer2d, Raster(4, 4, 255), false, {}, {}});
  CHECK(code_of([&] { store.add({"x", AssetKind::Layer2d, Raster(4, 4, 255), false, {}, {}}); }) ==
        ErrorCode::SchemaViolation);
  CHECK(code_of([&] { store.add({"clear", AssetKind::Layer2d, Raster(4, 4, 0), false, {}, {}}); }) ==
        ErrorCode::DegenerateAsset);

  const auto dir = scratch_dir("asset-roundtrip");
  assets.save(dir);
  const AssetStore again = AssetStore::load(dir);
  CHECK(again.at("ring").layer == assets.at("ring").layer);
  CHECK(again.at("box_tall").extent == assets.at("box_tall").extent);
  CHECK(again.index_json() == assets.index_json());
}

TEST_CASE("png round trip") {
  Rng rng(5);
  const Raster r = random_layer(rng, 17, 9);
  CHECK(decode_png(encode_png(r)) == r);
  CHECK(encode_png(r) == encode_png(r));
  std::vector<std::uint8_t> bad = encode_png(r);
  bad.resize(bad.size() / 2);
  CHECK(code_of([&] { decode_png(bad); }) == ErrorCode::IoFailure);
}

TEST_CASE("json round trips") {
  const SceneState s = real_scene(12.125, 50.5, 77.75);
  CHECK(scene_state_from_json(to_json(s)) == s);
  const OperationCommand c{"a", OpKind::T, {1.5, -2.25, 3}};
  CHECK(operation_command_from_json(to_json(c)) == c);
  const OperationRecord rec{c, {0.1, 0.2}, {0.0, 0.1, 0.2, 0.3}, {0.4, 0.5, 0.6, 0.7}, 4};
  CHECK(operation_record_from_json(to_json(rec)) == rec);
  const Annotation a{"a", {1, 2, 3, 4}, {-1, 2, 3, 4}, {1, 3}, 0.5, 1};
  CHECK(annotation_from_json(to_json(a)) == a);
  CHECK(code_of([] { scene_state_from_json(nlohmann::json{{"domain", "real"}}); }) == ErrorCode::SchemaViolation);
}
