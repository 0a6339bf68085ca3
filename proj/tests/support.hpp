// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit and acceptance suites.

#pragma once

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "sceneedit/assets.hpp"
#include "sceneedit/rng.hpp"
#include "sceneedit/scene.hpp"

namespace sceneedit::testing {

namespace fs = std::filesystem;

/// Fresh scratch directory under the system temp dir, removed on reuse.
inline fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sceneedit-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Demo asset set on disk; backgrounds are `background_size` square.
inline const fs::path& demo_asset_dir(int background_size = 64) {
  static const fs::path dir = [&] {
    const fs::path d = scratch_dir("assets");
    make_demo_assets(d, 1, background_size);
    return d;
  }();
  return dir;
}

inline const AssetStore& demo_assets() {
  static const AssetStore store = AssetStore::load(demo_asset_dir());
  return store;
}

/// Random straight-alpha layer; roughly a third of the pixels are fully
/// transparent and a third fully opaque.
inline Raster random_layer(Rng& rng, int w, int h) {
  Raster r(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* p = r.pixel(x, y);
      for (int c = 0; c < 3; ++c) p[c] = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
      const auto mode = rng.uniform_int(0, 2);
      p[3] = mode == 0 ? 0 : mode == 1 ? 255 : static_cast<std::uint8_t>(rng.uniform_int(1, 254));
    }
  }
  return r;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace sceneedit::testing
