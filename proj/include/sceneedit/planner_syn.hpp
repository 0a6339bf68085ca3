// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sceneedit/rng.hpp"
#include "sceneedit/scene.hpp"
#include "sceneedit/serialization.hpp"

namespace sceneedit {

struct Aabb3 {
  Vec3 min;
  Vec3 max;
  friend bool operator==(const Aabb3&, const Aabb3&) = default;
};

/// Strict interior overlap; touching faces do not collide.
inline bool aabb_overlap(const Aabb3& a, const Aabb3& b) {
  return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y &&
         a.min.z < b.max.z && b.min.z < a.max.z;
}

/// Side length of the square ground patch the default camera frames.
inline constexpr double kGroundExtent = 10.0;

Camera default_camera();

/// Intrinsic X→Y→Z rotation, angles in degrees.
Mat3 rotation_matrix(const Vec3& rotation_deg);

/// The eight world-space corners of an instance's oriented box.
std::array<Vec3, 8> box_corners(const ObjectInstance& instance, const ObjectAsset& asset);
Aabb3 world_aabb(const ObjectInstance& instance, const ObjectAsset& asset);

/// Returns a copy translated vertically so its AABB rests on y = 0.
ObjectInstance grounded(const ObjectInstance& instance, const ObjectAsset& asset);

struct Projection {
  Vec2 pixel;
  double depth = 0.0;  // distance along the view axis
};

/// Perspective projection to canvas pixels; nullopt behind the camera.
std::optional<Projection> project(const Camera& camera, int width, int height, const Vec3& point);

/// Per instance: all 8 AABB corners inside the image and strictly between
/// the near and far planes.
std::vector<bool> check_frustum(const SceneState& state, const AssetStore& assets);

/// Index pairs whose AABBs overlap.
std::vector<std::pair<std::size_t, std::size_t>> find_collisions(const SceneState& state,
                                                                 const AssetStore& assets);

/// Grounded, collision-free, fully visible random placement of `asset_ids`.
/// Throws PlacementExhausted after `max_attempts` failures for one object.
SceneState place_objects(const std::string& background_id, const std::vector<std::string>& asset_ids,
                         const AssetStore& assets, int width, int height, Rng& rng,
                         const Camera& camera = default_camera(), int max_attempts = 64);

/// Synthetic-domain transition: ground-plane T, bottom-anchored S, and
/// per-axis rotations with re-grounding; rejects colliding or out-of-frustum
/// results.
SceneState apply_operation_3d(const SceneState& state, const OperationCommand& cmd,
                              const AssetStore& assets, const TransitionLimits& limits = {});

/// Z-buffered flat-shaded box render (ray cast per pixel center).
Observation proxy_render(const SceneState& state, const AssetStore& assets);

namespace reference {
Observation proxy_render(const SceneState& state, const AssetStore& assets);
}

/// Color used for the empty background of proxy renders.
inline constexpr std::array<std::uint8_t, 4> kProxyBackground{186, 196, 212, 255};

struct ScriptTransform {
  Vec3 position;
  Vec3 rotation_deg;
  double scale = 1.0;
  friend bool operator==(const ScriptTransform&, const ScriptTransform&) = default;
};

/// One transform snapshot. Round 0 has one entry per instance and no
/// operation; every later round has exactly one entry for the edited instance.
struct ScriptEntry {
  int index = 0;
  std::string instance_id;
  std::optional<OperationCommand> op;
  ScriptTransform transform;
  friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

/// Renderer-agnostic record of a synthetic sequence.
struct SceneScript {
  std::string background;
  Camera camera;
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> instances;  // (instance_id, asset_id)
  std::vector<ScriptEntry> rounds;

  /// Number of distinct round indices, i.e. frames the script describes.
  std::size_t snapshot_count() const;
  friend bool operator==(const SceneScript&, const SceneScript&) = default;
};

/// `states` holds the initial state followed by one state per command.
/// Throws InconsistentSequence if a command does not reproduce its state.
SceneScript emit_scene_script(const std::vector<SceneState>& states,
                              const std::vector<OperationCommand>& commands,
                              const AssetStore& assets);

/// Rebuilds every snapshot state from a script.
std::vector<SceneState> replay_scene_script(const SceneScript& script);

nlohmann::json to_json(const SceneScript& script);
SceneScript scene_script_from_json(const nlohmann::json& j);

}  // namespace sceneedit
