// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sceneedit/assets.hpp"
#include "sceneedit/geometry.hpp"
#include "sceneedit/raster.hpp"

namespace sceneedit {

enum class Domain { Real, Syn };
enum class OpKind { T, S, X, Y, Z };

std::string_view to_string(Domain domain);
Domain domain_from_string(std::string_view name);
std::string_view to_string(OpKind kind);
OpKind op_kind_from_string(std::string_view name);

/// Pose of a layer2d instance: canvas pixel center plus depth.
struct LayerPose {
  Vec2 center_px;
  double depth = 0.0;
  friend bool operator==(const LayerPose&, const LayerPose&) = default;
};

/// Pose of a box3d instance. `position` is the box center (rotation pivot)
/// in a right-handed y-up world; `rotation_deg` is an intrinsic X→Y→Z triple.
struct BoxPose {
  Vec3 position;
  Vec3 rotation_deg;
  friend bool operator==(const BoxPose&, const BoxPose&) = default;
};

struct ObjectInstance {
  std::string instance_id;
  std::string asset_id;
  double scale = 1.0;  // f_s
  std::variant<LayerPose, BoxPose> pose;

  bool is_layer() const { return std::holds_alternative<LayerPose>(pose); }
  const LayerPose& layer() const { return std::get<LayerPose>(pose); }
  LayerPose& layer() { return std::get<LayerPose>(pose); }
  const BoxPose& box() const { return std::get<BoxPose>(pose); }
  BoxPose& box() { return std::get<BoxPose>(pose); }

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

struct Camera {
  Vec3 position{0.0, 7.5, 11.0};
  Vec3 look_at{0.0, 0.0, 0.0};
  double vfov_deg = 50.0;
  double near_plane = 0.1;
  double far_plane = 100.0;
  friend bool operator==(const Camera&, const Camera&) = default;
};

struct SceneState {
  Domain domain = Domain::Real;
  std::string background_id;
  int width = 0;
  int height = 0;
  std::vector<ObjectInstance> objects;  // insertion order
  std::optional<Camera> camera;         // syn only
  std::uint64_t rng_seed = 0;
  int round = 0;

  const ObjectInstance* find(const std::string& instance_id) const;
  ObjectInstance* find(const std::string& instance_id);
  int shortest_side() const { return std::min(width, height); }

  friend bool operator==(const SceneState&, const SceneState&) = default;
};

/// Value arity depends on kind and domain: T is (dx, dy, dd) in the real
/// domain and (dx, dz) in the synthetic one; S is one positive multiplier;
/// X/Y/Z is one angle in degrees.
struct OperationCommand {
  std::string target_instance_id;
  OpKind kind = OpKind::T;
  std::vector<double> value;
  friend bool operator==(const OperationCommand&, const OperationCommand&) = default;
};

struct SourceRegion {
  NormPoint centroid;
  NormBox bbox;
  friend bool operator==(const SourceRegion&, const SourceRegion&) = default;
};

struct OperationRecord {
  OperationCommand command;
  NormPoint source_centroid;
  NormBox source_bbox;
  NormBox target_bbox;
  int round_index = 0;
  friend bool operator==(const OperationRecord&, const OperationRecord&) = default;
};

struct Annotation {
  std::string instance_id;
  BoxD bbox_px;       // clipped to the canvas
  BoxD full_bbox_px;  // unclipped footprint, may be negative
  Vec2 centroid_px;   // center of the unclipped footprint
  double visible_fraction = 0.0;
  int depth_rank = 0;  // 0 = nearest to the viewer
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Observation {
  Raster image;
  std::vector<Annotation> annotations;  // same order as SceneState::objects

  const Annotation* find(const std::string& instance_id) const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Bounds enforced by state transitions. Defaults are the dataset constants.
struct TransitionLimits {
  double depth_min = 10.0;
  double depth_max = 200.0;
  double scale_min = 0.2;
  double scale_max = 4.0;
  // Synthetic domain per-step limits.
  double step_scale_min = 0.2;
  double step_scale_max = 4.0;
  double angle_x = 50.0;
  double angle_y = 45.0;
  double angle_z = 60.0;
};

/// Legal operation kinds for a domain, in canonical order.
std::vector<OpKind> legal_kinds(Domain domain);
std::size_t value_arity(Domain domain, OpKind kind);

/// Lists type-invariant violations; empty means the state is valid.
std::vector<std::string> validate_state(const SceneState& state, const AssetStore& assets,
                                        const TransitionLimits& limits = {});

/// State transition p_tf. Pure: returns a new state with exactly one
/// instance changed and `round` advanced.
SceneState apply_operation(const SceneState& state, const OperationCommand& cmd,
                           const AssetStore& assets, const TransitionLimits& limits = {});

/// Observation map f_m for either domain.
Observation render(const SceneState& state, const AssetStore& assets);

/// Tight footprint of one instance in canvas-normalized coordinates,
/// including off-canvas extent. Throws DegenerateFootprint for empty ones.
SourceRegion derive_source_region(const SceneState& state, const std::string& instance_id,
                                  const AssetStore& assets);

/// Target-location mask on an h×w grid, or all zeros when `omit` is set.
Mask derive_target_mask(const SceneState& state_after, const std::string& instance_id,
                        int grid_height, int grid_width, const AssetStore& assets,
                        bool omit = false);

/// Builds the record for `cmd` from the pre- and post-transition states.
OperationRecord make_record(const SceneState& before, const SceneState& after,
                            const OperationCommand& cmd, const AssetStore& assets);

}  // namespace sceneedit
