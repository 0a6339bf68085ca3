// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

// Parallel kernels against their serial reference twins.

#include <benchmark/benchmark.h>

#include "sceneedit/attention.hpp"
#include "sceneedit/planner_syn.hpp"
#include "sceneedit/render_real.hpp"
#include "sceneedit/sampler.hpp"

namespace {

using namespace sceneedit;

struct RealScene {
  SceneState state;
  AssetStore assets;
  Raster background;
  std::vector<PlacedLayer> layers;
};

const RealScene& real_scene() {
  static const RealScene scene = [] {
    RealScene s;
    Raster bg(512, 512);
    bg.fill(90, 120, 160, 255);
    s.assets.add({"bg", AssetKind::Layer2d, bg, false, {}, {"background"}});
    for (int i = 0; i < 4; ++i) {
      Raster layer(160, 120);
      layer.fill(static_cast<std::uint8_t>(60 * i), 180, 90, 200);
      s.assets.add({"layer" + std::to_string(i), AssetKind::Layer2d, layer, false, {}, {"object"}});
    }
    s.state.domain = Domain::Real;
    s.state.background_id = "bg";
    s.state.width = s.state.height = 512;
    for (int i = 0; i < 4; ++i) {
      s.state.objects.push_back({"o" + std::to_string(i), "layer" + std::to_string(i), 1.5,
                                 LayerPose{{100.0 + 90 * i, 256.0}, 30.0 + 40 * i}});
    }
    s.background = prepare_background(s.state, s.assets);
    const SizeConfig cfg = SizeConfig::for_canvas(512, 512);
    for (const auto& inst : s.state.objects) {
      s.layers.push_back(rasterize_layer(s.assets.at(inst.asset_id), inst, 512, 512, cfg));
    }
    return s;
  }();
  return scene;
}

void BM_Composite(benchmark::State& st) {
  const RealScene& s = real_scene();
  for (auto _ : st) benchmark::DoNotOptimize(composite_layers(s.state, s.background, s.layers));
}
void BM_CompositeReference(benchmark::State& st) {
  const RealScene& s = real_scene();
  for (auto _ : st) benchmark::DoNotOptimize(reference::composite_layers(s.state, s.background, s.layers));
}

struct SynScene {
  SceneState state;
  AssetStore assets;
};

const SynScene& syn_scene() {
  static const SynScene scene = [] {
    SynScene s;
    const std::pair<const char*, Vec3> boxes[] = {{"a", {1, 1, 1}}, {"b", {0.8, 1.6, 0.8}}, {"c", {1.6, 0.8, 1}}};
    for (const auto& [id, extent] : boxes) s.assets.add({id, AssetKind::Box3d, {}, false, extent, {"object"}});
    Rng rng(1);
    s.state = place_objects("studio", {"a", "b", "c"}, s.assets, 256, 256, rng);
    return s;
  }();
  return scene;
}

void BM_ProxyRender(benchmark::State& st) {
  const SynScene& s = syn_scene();
  for (auto _ : st) benchmark::DoNotOptimize(proxy_render(s.state, s.assets));
}
void BM_ProxyRenderReference(benchmark::State& st) {
  const SynScene& s = syn_scene();
  for (auto _ : st) benchmark::DoNotOptimize(reference::proxy_render(s.state, s.assets));
}

Matrix tokens(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (double& v : m.data()) v = rng.uniform(-1, 1);
  return m;
}

void BM_SelfAttention(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const AttentionParams p = AttentionParams::init(64, 64, 4, 1);
  const Matrix x = tokens(n, 64, 2);
  for (auto _ : st) benchmark::DoNotOptimize(self_attention(x, p));
}
void BM_SelfAttentionReference(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const AttentionParams p = AttentionParams::init(64, 64, 4, 1);
  const Matrix x = tokens(n, 64, 2);
  for (auto _ : st) benchmark::DoNotOptimize(reference::self_attention(x, p));
}

void BM_ContextAttention(benchmark::State& st) {
  AttentionParams p = AttentionParams::init(64, 64, 1, 3);
  p.lambda = 0.5;
  const Matrix cur = tokens(1024, 64, 4), prev = tokens(1024, 64, 5);
  const Mask all(32, 32, 1);
  for (auto _ : st) benchmark::DoNotOptimize(context_self_attention(cur, prev, all, all, all, p));
}
void BM_ContextAttentionReference(benchmark::State& st) {
  AttentionParams p = AttentionParams::init(64, 64, 1, 3);
  p.lambda = 0.5;
  const Matrix cur = tokens(1024, 64, 4), prev = tokens(1024, 64, 5);
  const Mask all(32, 32, 1);
  for (auto _ : st) benchmark::DoNotOptimize(reference::context_self_attention(cur, prev, all, all, all, p));
}

}  // namespace

BENCHMARK(BM_Composite)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompositeReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProxyRender)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProxyRenderReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfAttention)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfAttentionReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContextAttention)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContextAttentionReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
