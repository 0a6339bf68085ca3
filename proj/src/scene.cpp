// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/scene.hpp"

#include <cmath>
#include <set>

#include "sceneedit/error.hpp"
#include "sceneedit/planner_syn.hpp"
#include "sceneedit/render_real.hpp"

namespace sceneedit {

std::string_view to_string(Domain domain) { return domain == Domain::Real ? "real" : "syn"; }

Domain domain_from_string(std::string_view name) {
  if (name == "real") return Domain::Real;
  if (name == "syn") return Domain::Syn;
  fail(ErrorCode::SchemaViolation, "unknown domain '" + std::string(name) + "'");
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::T: return "T";
    case OpKind::S: return "S";
    case OpKind::X: return "X";
    case OpKind::Y: return "Y";
    case OpKind::Z: return "Z";
  }
  return "?";
}

OpKind op_kind_from_string(std::string_view name) {
  if (name == "T") return OpKind::T;
  if (name == "S") return OpKind::S;
  if (name == "X") return OpKind::X;
  if (name == "Y") return OpKind::Y;
  if (name == "Z") return OpKind::Z;
  fail(ErrorCode::IllegalCommand, "unknown operation kind '" + std::string(name) + "'");
}

const ObjectInstance* SceneState::find(const std::string& instance_id) const {
  for (const auto& o : objects)
    if (o.instance_id == instance_id) return &o;
  return nullptr;
}

ObjectInstance* SceneState::find(const std::string& instance_id) {
  for (auto& o : objects)
    if (o.instance_id == instance_id) return &o;
  return nullptr;
}

const Annotation* Observation::find(const std::string& instance_id) const {
  for (const auto& a : annotations)
    if (a.instance_id == instance_id) return &a;
  return nullptr;
}

std::vector<OpKind> legal_kinds(Domain domain) {
  if (domain == Domain::Real) return {OpKind::T, OpKind::S};
  return {OpKind::T, OpKind::S, OpKind::X, OpKind::Y, OpKind::Z};
}

std::size_t value_arity(Domain domain, OpKind kind) {
  if (kind == OpKind::T) return domain == Domain::Real ? 3 : 2;
  return 1;
}

std::vector<std::string> validate_state(const SceneState& state, const AssetStore& assets,
                                        const TransitionLimits& limits) {
  std::vector<std::string> out;
  if (state.width <= 0 || state.height <= 0) out.push_back("canvas dimensions must be positive");
  if (state.domain == Domain::Syn && !state.camera) out.push_back("synthetic scene without camera");
  if (state.domain == Domain::Real && state.camera) out.push_back("realistic scene with a camera");
  std::set<std::string> ids;
  bool kinds_ok = true;
  for (const auto& inst : state.objects) {
    const std::string& id = inst.instance_id;
    if (!ids.insert(id).second) out.push_back("duplicate instance id '" + id + "'");
    const ObjectAsset* asset = assets.find(inst.asset_id);
    if (!asset) {
      out.push_back("instance '" + id + "' references missing asset '" + inst.asset_id + "'");
      kinds_ok = false;
      continue;
    }
    const bool want_layer = state.domain == Domain::Real;
    if ((asset->kind == AssetKind::Layer2d) != want_layer || inst.is_layer() != want_layer) {
      out.push_back("instance '" + id + "' kind does not match the domain");
      kinds_ok = false;
      continue;
    }
    if (!(inst.scale >= limits.scale_min && inst.scale <= limits.scale_max)) {
      out.push_back("instance '" + id + "' scale factor out of bounds");
    }
    if (inst.is_layer()) {
      const LayerPose& p = inst.layer();
      if (!(p.depth >= limits.depth_min && p.depth <= limits.depth_max)) {
        out.push_back("instance '" + id + "' depth out of bounds");
      }
      if (!(p.center_px.x >= 0 && p.center_px.x <= state.width && p.center_px.y >= 0 &&
            p.center_px.y <= state.height)) {
        out.push_back("instance '" + id + "' centroid outside the canvas");
      }
    } else {
      const Aabb3 box = world_aabb(inst, *asset);
      if (std::abs(box.min.y) > 1e-9) out.push_back("instance '" + id + "' is not grounded");
    }
  }
  if (state.domain == Domain::Syn && state.camera && kinds_ok) {
    for (const auto& [a, b] : find_collisions(state, assets)) {
      out.push_back("instances '" + state.objects[a].instance_id + "' and '" + state.objects[b].instance_id +
                    "' collide");
    }
    const auto visible = check_frustum(state, assets);
    for (std::size_t i = 0; i < visible.size(); ++i) {
      if (!visible[i]) out.push_back("instance '" + state.objects[i].instance_id + "' leaves the view frustum");
    }
  }
  return out;
}

namespace {

void check_command_shape(const SceneState& state, const OperationCommand& cmd) {
  const auto kinds = legal_kinds(state.domain);
  if (std::find(kinds.begin(), kinds.end(), cmd.kind) == kinds.end()) {
    fail(ErrorCode::IllegalKindForDomain, "operation " + std::string(to_string(cmd.kind)) + " is not available in the " +
                                              std::string(to_string(state.domain)) + " domain");
  }
  const std::size_t arity = value_arity(state.domain, cmd.kind);
  if (cmd.value.size() != arity) {
    fail(ErrorCode::IllegalCommand, "operation " + std::string(to_string(cmd.kind)) + " expects " +
                                        std::to_string(arity) + " value(s)");
  }
  for (double v : cmd.value)
    if (!std::isfinite(v)) fail(ErrorCode::IllegalCommand, "operation values must be finite");
}

SceneState apply_operation_real(const SceneState& state, const OperationCommand& cmd,
                                const TransitionLimits& limits) {
  SceneState next = state;
  ObjectInstance& inst = *next.find(cmd.target_instance_id);
  LayerPose& pose = inst.layer();
  if (cmd.kind == OpKind::T) {
    pose.center_px.x += cmd.value[0];
    pose.center_px.y += cmd.value[1];
    pose.depth += cmd.value[2];
    if (!(pose.depth >= limits.depth_min && pose.depth <= limits.depth_max)) {
      fail(ErrorCode::BoundViolation, "depth " + std::to_string(pose.depth) + " leaves [" +
                                          std::to_string(limits.depth_min) + ", " + std::to_string(limits.depth_max) +
                                          "]");
    }
    if (!(pose.center_px.x >= 0 && pose.center_px.x <= state.width && pose.center_px.y >= 0 &&
          pose.center_px.y <= state.height)) {
      fail(ErrorCode::BoundViolation, "centroid of '" + inst.instance_id + "' would leave the canvas");
    }
  } else {
    const double m = cmd.value[0];
    if (!(m > 0.0)) fail(ErrorCode::BoundViolation, "scale multiplier must be positive");
    const double scale = inst.scale * m;
    if (!(scale >= limits.scale_min && scale <= limits.scale_max)) {
      fail(ErrorCode::BoundViolation, "scale factor " + std::to_string(scale) + " leaves [" +
                                          std::to_string(limits.scale_min) + ", " + std::to_string(limits.scale_max) +
                                          "]");
    }
    inst.scale = scale;
  }
  next.round = state.round + 1;
  return next;
}

}  // namespace

SceneState apply_operation(const SceneState& state, const OperationCommand& cmd, const AssetStore& assets,
                           const TransitionLimits& limits) {
  if (!state.find(cmd.target_instance_id)) {
    fail(ErrorCode::UnknownInstance, "no instance '" + cmd.target_instance_id + "'");
  }
  check_command_shape(state, cmd);
  if (state.domain == Domain::Real) return apply_operation_real(state, cmd, limits);
  return apply_operation_3d(state, cmd, assets, limits);
}

Observation render(const SceneState& state, const AssetStore& assets) {
  return state.domain == Domain::Real ? composite(state, assets) : proxy_render(state, assets);
}

SourceRegion derive_source_region(const SceneState& state, const std::string& instance_id,
                                  const AssetStore& assets) {
  const ObjectInstance* inst = state.find(instance_id);
  if (!inst) fail(ErrorCode::UnknownInstance, "no instance '" + instance_id + "'");
  const ObjectAsset& asset = assets.at(inst->asset_id);
  BoxD box;
  if (state.domain == Domain::Real) {
    const PlacedLayer placed =
        rasterize_layer(asset, *inst, state.width, state.height, SizeConfig::for_canvas(state.width, state.height));
    if (placed.opaque_pixels == 0) {
      fail(ErrorCode::DegenerateFootprint, "instance '" + instance_id + "' has an empty footprint");
    }
    box = to_boxd(placed.footprint);
  } else {
    const Camera& camera = *state.camera;
    bool first = true;
    for (const Vec3& corner : box_corners(*inst, asset)) {
      const auto p = project(camera, state.width, state.height, corner);
      if (!p || p->depth <= camera.near_plane) {
        fail(ErrorCode::DegenerateFootprint, "instance '" + instance_id + "' crosses the camera plane");
      }
      if (first) {
        box = {p->pixel.x, p->pixel.y, p->pixel.x, p->pixel.y};
        first = false;
      } else {
        box.x0 = std::min(box.x0, p->pixel.x);
        box.y0 = std::min(box.y0, p->pixel.y);
        box.x1 = std::max(box.x1, p->pixel.x);
        box.y1 = std::max(box.y1, p->pixel.y);
      }
    }
    if (!(box.x1 > box.x0 && box.y1 > box.y0)) {
      fail(ErrorCode::DegenerateFootprint, "instance '" + instance_id + "' projects to zero area");
    }
  }
  SourceRegion region;
  region.bbox = normalize_box(box, state.width, state.height);
  region.centroid = region.bbox.center();
  return region;
}

Mask derive_target_mask(const SceneState& state_after, const std::string& instance_id, int grid_height,
                        int grid_width, const AssetStore& assets, bool omit) {
  if (!state_after.find(instance_id)) fail(ErrorCode::UnknownInstance, "no instance '" + instance_id + "'");
  if (omit) return Mask(grid_height, grid_width, 0);
  const SourceRegion region = derive_source_region(state_after, instance_id, assets);
  return box_coverage_mask(region.bbox, grid_height, grid_width);
}

OperationRecord make_record(const SceneState& before, const SceneState& after, const OperationCommand& cmd,
                            const AssetStore& assets) {
  OperationRecord record;
  record.command = cmd;
  const SourceRegion source = derive_source_region(before, cmd.target_instance_id, assets);
  record.source_centroid = source.centroid;
  record.source_bbox = source.bbox;
  record.target_bbox = derive_source_region(after, cmd.target_instance_id, assets).bbox;
  record.round_index = before.round;
  return record;
}

}  // namespace sceneedit
