// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sceneedit/geometry.hpp"
#include "sceneedit/raster.hpp"

namespace sceneedit {

enum class AssetKind { Layer2d, Box3d };

std::string_view to_string(AssetKind kind);
AssetKind asset_kind_from_string(std::string_view name);

struct ObjectAsset {
  std::string id;
  AssetKind kind = AssetKind::Layer2d;
  Raster layer;                 // layer2d only, straight alpha after loading
  bool premultiplied = false;   // as stored on disk
  Vec3 extent;                  // box3d only: (w, h, depth) in scene units
  std::vector<std::string> tags;

  bool has_tag(std::string_view tag) const;
};

/// In-memory asset index. On disk: `assets.json` (array of
/// {id, kind, tags, extent?, premultiplied?}) next to one `<id>.png` per
/// layer2d asset.
class AssetStore {
 public:
  AssetStore() = default;

  static AssetStore load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;

  /// Validates and inserts; rejects duplicates and degenerate assets.
  void add(ObjectAsset asset);

  const ObjectAsset* find(const std::string& id) const;
  /// Throws MissingAsset.
  const ObjectAsset& at(const std::string& id) const;

  std::vector<const ObjectAsset*> with_tag(std::string_view tag) const;
  std::vector<const ObjectAsset*> of_kind(AssetKind kind) const;
  std::size_t size() const { return assets_.size(); }

  nlohmann::json index_json() const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::map<std::string, ObjectAsset> assets_;
  std::filesystem::path root_;
};

/// Writes a small procedurally drawn asset set: gradient backgrounds, RGBA
/// object cut-outs (ellipses, rounded boxes, rings) and box3d proxies.
void make_demo_assets(const std::filesystem::path& dir, std::uint64_t seed,
                      int background_size = 512);

}  // namespace sceneedit
