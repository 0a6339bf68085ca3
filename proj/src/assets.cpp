// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/assets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sceneedit/error.hpp"
#include "sceneedit/rng.hpp"

namespace sceneedit {

using nlohmann::json;

std::string_view to_string(AssetKind kind) { return kind == AssetKind::Layer2d ? "layer2d" : "box3d"; }

AssetKind asset_kind_from_string(std::string_view name) {
  if (name == "layer2d") return AssetKind::Layer2d;
  if (name == "box3d") return AssetKind::Box3d;
  fail(ErrorCode::SchemaViolation, "unknown asset kind '" + std::string(name) + "'");
}

bool ObjectAsset::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

void AssetStore::add(ObjectAsset asset) {
  if (asset.id.empty()) fail(ErrorCode::SchemaViolation, "asset id must not be empty");
  if (assets_.count(asset.id)) fail(ErrorCode::SchemaViolation, "duplicate asset id '" + asset.id + "'");
  if (asset.kind == AssetKind::Layer2d) {
    if (asset.layer.empty()) fail(ErrorCode::DegenerateAsset, "asset '" + asset.id + "' has no pixels");
    if (asset.premultiplied) {
      unpremultiply(asset.layer);
      asset.premultiplied = false;
    }
    if (opaque_pixel_count(asset.layer) == 0) {
      fail(ErrorCode::DegenerateAsset, "asset '" + asset.id + "' is fully transparent");
    }
  } else {
    const Vec3& e = asset.extent;
    if (!(e.x > 0.0 && e.y > 0.0 && e.z > 0.0) || !std::isfinite(e.x + e.y + e.z)) {
      fail(ErrorCode::DegenerateAsset, "asset '" + asset.id + "' needs a strictly positive extent");
    }
  }
  std::string id = asset.id;
  assets_.emplace(std::move(id), std::move(asset));
}

const ObjectAsset* AssetStore::find(const std::string& id) const {
  auto it = assets_.find(id);
  return it == assets_.end() ? nullptr : &it->second;
}

const ObjectAsset& AssetStore::at(const std::string& id) const {
  const ObjectAsset* asset = find(id);
  if (!asset) fail(ErrorCode::MissingAsset, "unknown asset '" + id + "'");
  return *asset;
}

std::vector<const ObjectAsset*> AssetStore::with_tag(std::string_view tag) const {
  std::vector<const ObjectAsset*> out;
  for (const auto& [id, asset] : assets_)
    if (asset.has_tag(tag)) out.push_back(&asset);
  return out;
}

std::vector<const ObjectAsset*> AssetStore::of_kind(AssetKind kind) const {
  std::vector<const ObjectAsset*> out;
  for (const auto& [id, asset] : assets_)
    if (asset.kind == kind) out.push_back(&asset);
  return out;
}

json AssetStore::index_json() const {
  json index = json::array();
  for (const auto& [id, asset] : assets_) {
    json entry{{"id", asset.id}, {"kind", to_string(asset.kind)}, {"tags", asset.tags}};
    if (asset.kind == AssetKind::Box3d) {
      entry["extent"] = {asset.extent.x, asset.extent.y, asset.extent.z};
    } else {
      entry["size"] = {asset.layer.width(), asset.layer.height()};
    }
    index.push_back(std::move(entry));
  }
  return index;
}

AssetStore AssetStore::load(const std::filesystem::path& dir) {
  const auto index_path = dir / "assets.json";
  if (!std::filesystem::is_regular_file(index_path)) {
    fail(ErrorCode::MissingAsset, "no assets.json in " + dir.string());
  }
  json index;
  try {
    std::ifstream in(index_path);
    index = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptManifest, "assets.json: " + std::string(e.what()));
  }
  if (!index.is_array()) fail(ErrorCode::SchemaViolation, "assets.json must be an array");

  AssetStore store;
  store.root_ = dir;
  for (const auto& entry : index) {
    try {
      ObjectAsset asset;
      asset.id = entry.at("id").get<std::string>();
      asset.kind = asset_kind_from_string(entry.at("kind").get<std::string>());
      asset.tags = entry.value("tags", std::vector<std::string>{});
      asset.premultiplied = entry.value("premultiplied", false);
      if (asset.kind == AssetKind::Box3d) {
        const auto e = entry.at("extent").get<std::vector<double>>();
        if (e.size() != 3) fail(ErrorCode::SchemaViolation, "extent of '" + asset.id + "' must have 3 values");
        asset.extent = {e[0], e[1], e[2]};
      } else {
        const auto png = dir / (asset.id + ".png");
        if (!std::filesystem::is_regular_file(png)) fail(ErrorCode::MissingAsset, "missing " + png.string());
        asset.layer = read_png(png);
      }
      store.add(std::move(asset));
    } catch (const json::exception& e) {
      fail(ErrorCode::SchemaViolation, "assets.json entry: " + std::string(e.what()));
    }
  }
  return store;
}

void AssetStore::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  json index = json::array();
  for (const auto& [id, asset] : assets_) {
    json entry{{"id", asset.id}, {"kind", to_string(asset.kind)}, {"tags", asset.tags}};
    if (asset.kind == AssetKind::Box3d) {
      entry["extent"] = {asset.extent.x, asset.extent.y, asset.extent.z};
    } else {
      write_png(dir / (asset.id + ".png"), asset.layer);
    }
    index.push_back(std::move(entry));
  }
  write_text_file(dir / "assets.json", index.dump(2) + "\n");
}

namespace {

std::uint8_t to_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0)); }

Raster gradient_background(int size, const std::array<double, 3>& sky, const std::array<double, 3>& ground,
                           Rng& rng) {
  Raster r(size, size);
  const double horizon = size * rng.uniform(0.45, 0.6);
  const double stripe = rng.uniform(6.0, 14.0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      std::uint8_t* p = r.pixel(x, y);
      if (y < horizon) {
        const double t = y / horizon;
        for (int c = 0; c < 3; ++c) p[c] = to_u8(sky[static_cast<std::size_t>(c)] * (0.75 + 0.25 * t));
      } else {
        const double t = (y - horizon) / (size - horizon);
        const double checker = (static_cast<int>(x / stripe) + static_cast<int>(y / stripe)) % 2 ? 1.0 : 0.9;
        for (int c = 0; c < 3; ++c) p[c] = to_u8(ground[static_cast<std::size_t>(c)] * (0.8 + 0.2 * t) * checker);
      }
      p[3] = 255;
    }
  }
  return r;
}

// Anti-aliased cut-out: signed distance `sdf(x, y)` in pixels, negative inside.
template <typename Sdf>
Raster cutout(int width, int height, const std::array<double, 3>& color, Sdf sdf) {
  Raster r(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double d = sdf(x + 0.5, y + 0.5);
      const double alpha = std::clamp(0.5 - d, 0.0, 1.0);
      std::uint8_t* p = r.pixel(x, y);
      const double shade = 0.7 + 0.3 * (1.0 - static_cast<double>(y) / height);
      const double band = ((x / 9 + y / 9) % 2) ? 1.0 : 0.85;
      for (int c = 0; c < 3; ++c) p[c] = to_u8(color[static_cast<std::size_t>(c)] * shade * band);
      p[3] = to_u8(alpha * 255.0);
    }
  }
  return r;
}

}  // namespace

void make_demo_assets(const std::filesystem::path& dir, std::uint64_t seed, int background_size) {
  Rng rng(seed);
  AssetStore store;
  const std::array<std::array<double, 3>, 3> skies{{{120, 170, 235}, {240, 200, 160}, {90, 110, 150}}};
  const std::array<std::array<double, 3>, 3> grounds{{{110, 150, 80}, {170, 140, 110}, {120, 120, 125}}};
  for (std::size_t i = 0; i < skies.size(); ++i) {
    ObjectAsset bg;
    bg.id = "background_" + std::to_string(i);
    bg.kind = AssetKind::Layer2d;
    bg.tags = {"background"};
    bg.layer = gradient_background(background_size, skies[i], grounds[i], rng);
    store.add(std::move(bg));
  }

  auto add_layer = [&](const std::string& id, Raster layer) {
    ObjectAsset a;
    a.id = id;
    a.kind = AssetKind::Layer2d;
    a.tags = {"object"};
    a.layer = std::move(layer);
    store.add(std::move(a));
  };
  add_layer("ellipse", cutout(160, 120, {220, 60, 50}, [](double x, double y) {
              const double nx = (x - 80) / 76, ny = (y - 60) / 56;
              return (std::sqrt(nx * nx + ny * ny) - 1.0) * 56;
            }));
  add_layer("rounded_box", cutout(128, 128, {60, 90, 210}, [](double x, double y) {
              const double qx = std::abs(x - 64) - 44, qy = std::abs(y - 64) - 44;
              const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
              return std::sqrt(ox * ox + oy * oy) + std::min(std::max(qx, qy), 0.0) - 16;
            }));
  add_layer("capsule", cutout(200, 100, {240, 190, 40}, [](double x, double y) {
              const double px = std::clamp(x, 50.0, 150.0);
              return std::hypot(x - px, y - 50) - 46;
            }));
  add_layer("ring", cutout(120, 120, {40, 170, 120}, [](double x, double y) {
              return std::abs(std::hypot(x - 60, y - 60) - 42) - 14;
            }));
  add_layer("tall_bar", cutout(60, 150, {150, 70, 170}, [](double x, double y) {
              const double qx = std::abs(x - 30) - 26, qy = std::abs(y - 75) - 71;
              return std::max(qx, qy);
            }));

  auto add_box = [&](const std::string& id, Vec3 extent) {
    ObjectAsset a;
    a.id = id;
    a.kind = AssetKind::Box3d;
    a.tags = {"object"};
    a.extent = extent;
    store.add(std::move(a));
  };
  add_box("box_unit", {1.0, 1.0, 1.0});
  add_box("box_tall", {0.8, 1.6, 0.8});
  add_box("box_wide", {1.6, 0.8, 1.0});
  add_box("box_small", {0.6, 0.6, 0.6});
  store.save(dir);
}

}  // namespace sceneedit
