// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/planner_syn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "sceneedit/error.hpp"

namespace sceneedit {

using nlohmann::json;

Camera default_camera() {
  Camera cam;
  cam.position = {0.0, 9.0, 14.0};
  cam.look_at = {0.0, 0.0, 0.0};
  cam.vfov_deg = 50.0;
  cam.near_plane = 0.1;
  cam.far_plane = 100.0;
  return cam;
}

Mat3 rotation_matrix(const Vec3& rotation_deg) {
  const double k = std::numbers::pi / 180.0;
  const double a = rotation_deg.x * k, b = rotation_deg.y * k, c = rotation_deg.z * k;
  Mat3 rx, ry, rz;
  rx.m = {1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a)};
  ry.m = {std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b)};
  rz.m = {std::cos(c), -std::sin(c), 0, std::sin(c), std::cos(c), 0, 0, 0, 1};
  return rx * ry * rz;
}

std::array<Vec3, 8> box_corners(const ObjectInstance& instance, const ObjectAsset& asset) {
  const BoxPose& pose = instance.box();
  const Vec3 half = asset.extent * (0.5 * instance.scale);
  const Mat3 r = rotation_matrix(pose.rotation_deg);
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local{(i & 1) ? half.x : -half.x, (i & 2) ? half.y : -half.y, (i & 4) ? half.z : -half.z};
    out[static_cast<std::size_t>(i)] = pose.position + r * local;
  }
  return out;
}

Aabb3 world_aabb(const ObjectInstance& instance, const ObjectAsset& asset) {
  const auto corners = box_corners(instance, asset);
  Aabb3 box{corners[0], corners[0]};
  for (const Vec3& c : corners) {
    box.min = {std::min(box.min.x, c.x), std::min(box.min.y, c.y), std::min(box.min.z, c.z)};
    box.max = {std::max(box.max.x, c.x), std::max(box.max.y, c.y), std::max(box.max.z, c.z)};
  }
  return box;
}

ObjectInstance grounded(const ObjectInstance& instance, const ObjectAsset& asset) {
  ObjectInstance out = instance;
  const Aabb3 box = world_aabb(instance, asset);
  out.box().position.y -= box.min.y;
  return out;
}

namespace {

struct CameraFrame {
  Vec3 origin;
  Vec3 forward;
  Vec3 right;
  Vec3 up;
  double tan_half = 0.0;
  double aspect = 1.0;
};

CameraFrame camera_frame(const Camera& camera, int width, int height) {
  CameraFrame f;
  f.origin = camera.position;
  f.forward = normalized(camera.look_at - camera.position);
  f.right = normalized(cross(f.forward, {0.0, 1.0, 0.0}));
  f.up = cross(f.right, f.forward);
  f.tan_half = std::tan(camera.vfov_deg * std::numbers::pi / 360.0);
  f.aspect = static_cast<double>(width) / height;
  return f;
}

std::array<Vec3, 8> aabb_corners(const Aabb3& b) {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = {(i & 1) ? b.max.x : b.min.x, (i & 2) ? b.max.y : b.min.y,
                                        (i & 4) ? b.max.z : b.min.z};
  }
  return out;
}

bool aabb_in_frustum(const Camera& camera, int width, int height, const Aabb3& box) {
  for (const Vec3& c : aabb_corners(box)) {
    const auto p = project(camera, width, height, c);
    if (!p) return false;
    if (!(p->depth > camera.near_plane && p->depth < camera.far_plane)) return false;
    if (p->pixel.x < 0.0 || p->pixel.x > width || p->pixel.y < 0.0 || p->pixel.y > height) return false;
  }
  return true;
}

const Camera& require_camera(const SceneState& state) {
  if (!state.camera) fail(ErrorCode::InvalidConfig, "synthetic scene has no camera");
  return *state.camera;
}

}  // namespace

std::optional<Projection> project(const Camera& camera, int width, int height, const Vec3& point) {
  const CameraFrame f = camera_frame(camera, width, height);
  const Vec3 d = point - f.origin;
  const double depth = dot(d, f.forward);
  if (!(depth > 0.0)) return std::nullopt;
  const double nx = dot(d, f.right) / (depth * f.tan_half * f.aspect);
  const double ny = dot(d, f.up) / (depth * f.tan_half);
  return Projection{{(nx + 1.0) * 0.5 * width, (1.0 - ny) * 0.5 * height}, depth};
}

std::vector<bool> check_frustum(const SceneState& state, const AssetStore& assets) {
  const Camera& camera = require_camera(state);
  std::vector<bool> out;
  out.reserve(state.objects.size());
  for (const auto& inst : state.objects) {
    out.push_back(aabb_in_frustum(camera, state.width, state.height, world_aabb(inst, assets.at(inst.asset_id))));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> find_collisions(const SceneState& state,
                                                                 const AssetStore& assets) {
  std::vector<Aabb3> boxes;
  for (const auto& inst : state.objects) boxes.push_back(world_aabb(inst, assets.at(inst.asset_id)));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (aabb_overlap(boxes[i], boxes[j])) out.emplace_back(i, j);
  return out;
}

SceneState place_objects(const std::string& background_id, const std::vector<std::string>& asset_ids,
                         const AssetStore& assets, int width, int height, Rng& rng, const Camera& camera,
                         int max_attempts) {
  if (asset_ids.empty()) fail(ErrorCode::InvalidConfig, "place_objects needs at least one asset");
  SceneState state;
  state.domain = Domain::Syn;
  state.background_id = background_id;
  state.width = width;
  state.height = height;
  state.camera = camera;

  std::vector<Aabb3> placed;
  const double half = kGroundExtent / 2.0;
  for (std::size_t i = 0; i < asset_ids.size(); ++i) {
    const ObjectAsset& asset = assets.at(asset_ids[i]);
    if (asset.kind != AssetKind::Box3d) fail(ErrorCode::IllegalKindForDomain, "'" + asset.id + "' is not a box3d asset");
    ObjectInstance inst;
    inst.instance_id = "obj" + std::to_string(i);
    inst.asset_id = asset.id;
    inst.scale = 1.0;
    bool ok = false;
    for (int attempt = 0; attempt < max_attempts && !ok; ++attempt) {
      const double x = rng.uniform(-half, half);
      const double z = rng.uniform(-half, half);
      inst.pose = BoxPose{{x, 0.0, z}, {0.0, 0.0, 0.0}};
      inst = grounded(inst, asset);
      const Aabb3 box = world_aabb(inst, asset);
      if (!aabb_in_frustum(camera, width, height, box)) continue;
      ok = std::none_of(placed.begin(), placed.end(), [&](const Aabb3& o) { return aabb_overlap(o, box); });
      if (ok) placed.push_back(box);
    }
    if (!ok) {
      fail(ErrorCode::PlacementExhausted, "could not place '" + asset.id + "' after " + std::to_string(max_attempts) +
                                              " attempts");
    }
    state.objects.push_back(inst);
  }
  return state;
}

namespace {

double wrap_degrees(double deg) {
  if (deg > 180.0 || deg <= -180.0) {
    deg = std::fmod(deg, 360.0);
    if (deg > 180.0) deg -= 360.0;
    if (deg <= -180.0) deg += 360.0;
  }
  return deg;
}

}  // namespace

SceneState apply_operation_3d(const SceneState& state, const OperationCommand& cmd, const AssetStore& assets,
                              const TransitionLimits& limits) {
  if (state.domain != Domain::Syn) fail(ErrorCode::IllegalKindForDomain, "apply_operation_3d needs a synthetic scene");
  const Camera& camera = require_camera(state);
  SceneState next = state;
  ObjectInstance* inst = next.find(cmd.target_instance_id);
  if (!inst) fail(ErrorCode::UnknownInstance, "no instance '" + cmd.target_instance_id + "'");
  if (cmd.value.size() != value_arity(Domain::Syn, cmd.kind)) {
    fail(ErrorCode::IllegalCommand, "wrong number of values for " + std::string(to_string(cmd.kind)));
  }
  const ObjectAsset& asset = assets.at(inst->asset_id);
  BoxPose& pose = inst->box();

  auto angle_step = [&](double limit) {
    const double angle = cmd.value[0];
    if (!(std::abs(angle) <= limit)) {
      fail(ErrorCode::BoundViolation, "rotation " + std::to_string(angle) + " exceeds ±" + std::to_string(limit));
    }
    return angle;
  };

  switch (cmd.kind) {
    case OpKind::T:
      pose.position.x += cmd.value[0];
      pose.position.z += cmd.value[1];
      break;
    case OpKind::S: {
      const double m = cmd.value[0];
      if (!(m >= limits.step_scale_min && m <= limits.step_scale_max)) {
        fail(ErrorCode::BoundViolation, "scale step " + std::to_string(m) + " outside [" +
                                            std::to_string(limits.step_scale_min) + ", " +
                                            std::to_string(limits.step_scale_max) + "]");
      }
      const double scale = inst->scale * m;
      if (!(scale >= limits.scale_min && scale <= limits.scale_max)) {
        fail(ErrorCode::BoundViolation, "scale factor " + std::to_string(scale) + " out of bounds");
      }
      inst->scale = scale;
      break;
    }
    case OpKind::X: pose.rotation_deg.x = wrap_degrees(pose.rotation_deg.x + angle_step(limits.angle_x)); break;
    case OpKind::Y: pose.rotation_deg.y = wrap_degrees(pose.rotation_deg.y + angle_step(limits.angle_y)); break;
    case OpKind::Z: pose.rotation_deg.z = wrap_degrees(pose.rotation_deg.z + angle_step(limits.angle_z)); break;
  }
  if (cmd.kind != OpKind::T) *inst = grounded(*inst, asset);

  const Aabb3 box = world_aabb(*inst, asset);
  for (const auto& other : next.objects) {
    if (other.instance_id == inst->instance_id) continue;
    if (aabb_overlap(box, world_aabb(other, assets.at(other.asset_id)))) {
      fail(ErrorCode::CollisionViolation, "'" + inst->instance_id + "' would collide with '" + other.instance_id + "'");
    }
  }
  if (!aabb_in_frustum(camera, state.width, state.height, box)) {
    fail(ErrorCode::FrustumViolation, "'" + inst->instance_id + "' would leave the view frustum");
  }
  next.round = state.round + 1;
  return next;
}

// ---------------------------------------------------------------------------
// Proxy renderer

namespace {

struct RenderBox {
  Vec3 center;
  Mat3 rotation;   // local → world
  Mat3 inverse;    // world → local
  Vec3 half;
  std::array<double, 3> color;
};

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  int axis = -1;
  double sign = 0.0;
};

// Slab test in box-local space; returns the entry hit in front of `t_min`.
Hit intersect_box(const RenderBox& box, const Vec3& origin, const Vec3& dir, double t_min) {
  const Vec3 o = box.inverse * (origin - box.center);
  const Vec3 d = box.inverse * dir;
  const double oc[3] = {o.x, o.y, o.z};
  const double dc[3] = {d.x, d.y, d.z};
  const double hc[3] = {box.half.x, box.half.y, box.half.z};
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  int axis = -1;
  double sign = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (dc[a] == 0.0) {
      if (oc[a] < -hc[a] || oc[a] > hc[a]) return {};
      continue;
    }
    double near_t = (-hc[a] - oc[a]) / dc[a];
    double far_t = (hc[a] - oc[a]) / dc[a];
    double s = -1.0;
    if (near_t > far_t) {
      std::swap(near_t, far_t);
      s = 1.0;
    }
    if (near_t > t0) {
      t0 = near_t;
      axis = a;
      sign = s;
    }
    t1 = std::min(t1, far_t);
  }
  if (axis < 0 || t0 > t1 || t0 < t_min) return {};
  return {t0, axis, sign};
}

constexpr std::array<std::array<double, 3>, 6> kPalette{{
    {214, 96, 77}, {67, 147, 195}, {120, 190, 90}, {240, 190, 60}, {150, 100, 190}, {90, 200, 190}}};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<RenderBox> render_boxes(const SceneState& state, const AssetStore& assets) {
  std::vector<RenderBox> boxes;
  for (const auto& inst : state.objects) {
    const ObjectAsset& asset = assets.at(inst.asset_id);
    RenderBox b;
    b.center = inst.box().position;
    b.rotation = rotation_matrix(inst.box().rotation_deg);
    b.inverse = b.rotation.transposed();
    b.half = asset.extent * (0.5 * inst.scale);
    b.color = kPalette[fnv1a(inst.instance_id) % kPalette.size()];
    boxes.push_back(b);
  }
  return boxes;
}

const Vec3 kLight = normalized({0.4, 0.8, 0.45});

// Shades one pixel; returns the owning box index or -1, and flags every box
// the ray hits at all in `hit_flags`.
int shade_pixel(const std::vector<RenderBox>& boxes, const CameraFrame& f, const Camera& camera, int width,
                int height, int x, int y, std::uint8_t* dst, std::uint8_t* hit_flags) {
  const double nx = 2.0 * (x + 0.5) / width - 1.0;
  const double ny = 1.0 - 2.0 * (y + 0.5) / height;
  const Vec3 dir = f.forward + f.right * (nx * f.tan_half * f.aspect) + f.up * (ny * f.tan_half);
  int owner = -1;
  Hit best;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Hit h = intersect_box(boxes[i], f.origin, dir, camera.near_plane);
    if (h.axis < 0 || h.t > camera.far_plane) continue;
    hit_flags[i] = 1;
    if (h.t < best.t) {
      best = h;
      owner = static_cast<int>(i);
    }
  }
  if (owner < 0) {
    std::copy(kProxyBackground.begin(), kProxyBackground.end(), dst);
    return -1;
  }
  const RenderBox& box = boxes[static_cast<std::size_t>(owner)];
  Vec3 local_normal{};
  (best.axis == 0 ? local_normal.x : best.axis == 1 ? local_normal.y : local_normal.z) = best.sign;
  const double lambert = std::max(0.0, dot(box.rotation * local_normal, kLight));
  const double shade = 0.45 + 0.55 * lambert;
  for (int c = 0; c < 3; ++c) {
    dst[c] = static_cast<std::uint8_t>(std::clamp(std::nearbyint(box.color[static_cast<std::size_t>(c)] * shade), 0.0, 255.0));
  }
  dst[3] = 255;
  return owner;
}

std::vector<Annotation> annotate_boxes(const SceneState& state, const AssetStore& assets,
                                       const std::vector<std::size_t>& visible, const std::vector<std::size_t>& hits) {
  const Camera& camera = *state.camera;
  const CameraFrame f = camera_frame(camera, state.width, state.height);
  const std::size_t n = state.objects.size();
  std::vector<double> depth(n);
  std::vector<Annotation> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ObjectInstance& inst = state.objects[i];
    Annotation& a = out[i];
    a.instance_id = inst.instance_id;
    depth[i] = dot(inst.box().position - f.origin, f.forward);
    BoxD box{};
    bool valid = true;
    bool first = true;
    for (const Vec3& c : box_corners(inst, assets.at(inst.asset_id))) {
      const auto p = project(camera, state.width, state.height, c);
      if (!p || p->depth <= camera.near_plane) {
        valid = false;
        break;
      }
      if (first) {
        box = {p->pixel.x, p->pixel.y, p->pixel.x, p->pixel.y};
        first = false;
      } else {
        box = {std::min(box.x0, p->pixel.x), std::min(box.y0, p->pixel.y), std::max(box.x1, p->pixel.x),
               std::max(box.y1, p->pixel.y)};
      }
    }
    if (valid) {
      a.full_bbox_px = box;
      a.bbox_px = {std::clamp(box.x0, 0.0, double(state.width)), std::clamp(box.y0, 0.0, double(state.height)),
                   std::clamp(box.x1, 0.0, double(state.width)), std::clamp(box.y1, 0.0, double(state.height))};
      a.centroid_px = {(box.x0 + box.x1) * 0.5, (box.y0 + box.y1) * 0.5};
    }
    a.visible_fraction = hits[i] == 0 ? 0.0 : static_cast<double>(visible[i]) / static_cast<double>(hits[i]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return depth[a] < depth[b]; });
  for (std::size_t rank = 0; rank < n; ++rank) out[order[rank]].depth_rank = static_cast<int>(rank);
  return out;
}

Observation proxy_render_impl(const SceneState& state, const AssetStore& assets, bool parallel) {
  const Camera& camera = require_camera(state);
  const auto boxes = render_boxes(state, assets);
  const CameraFrame f = camera_frame(camera, state.width, state.height);
  const int width = state.width;
  const int height = state.height;
  const std::size_t n = boxes.size();
  Observation obs;
  obs.image = Raster(width, height);
  // Per-row tallies keep the parallel loop free of shared counters.
  std::vector<std::size_t> row_visible(static_cast<std::size_t>(height) * n, 0);
  std::vector<std::size_t> row_hits(static_cast<std::size_t>(height) * n, 0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < height; ++y) {
    std::vector<std::uint8_t> flags(n);
    std::size_t* visible = row_visible.data() + static_cast<std::size_t>(y) * n;
    std::size_t* hits = row_hits.data() + static_cast<std::size_t>(y) * n;
    for (int x = 0; x < width; ++x) {
      std::fill(flags.begin(), flags.end(), 0);
      const int owner = shade_pixel(boxes, f, camera, width, height, x, y, obs.image.pixel(x, y), flags.data());
      if (owner >= 0) ++visible[owner];
      for (std::size_t i = 0; i < n; ++i) hits[i] += flags[i];
    }
  }

  std::vector<std::size_t> visible(n, 0), hits(n, 0);
  for (int y = 0; y < height; ++y)
    for (std::size_t i = 0; i < n; ++i) {
      visible[i] += row_visible[static_cast<std::size_t>(y) * n + i];
      hits[i] += row_hits[static_cast<std::size_t>(y) * n + i];
    }
  obs.annotations = annotate_boxes(state, assets, visible, hits);
  return obs;
}

}  // namespace

Observation proxy_render(const SceneState& state, const AssetStore& assets) {
  return proxy_render_impl(state, assets, true);
}

namespace reference {
Observation proxy_render(const SceneState& state, const AssetStore& assets) {
  return proxy_render_impl(state, assets, false);
}
}  // namespace reference

// ---------------------------------------------------------------------------
// Scene scripts

std::size_t SceneScript::snapshot_count() const {
  std::set<int> indices;
  for (const auto& e : rounds) indices.insert(e.index);
  return indices.size();
}

namespace {

ScriptTransform transform_of(const ObjectInstance& inst) {
  return {inst.box().position, inst.box().rotation_deg, inst.scale};
}

bool near(const Vec3& a, const Vec3& b, double tol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol && std::abs(a.z - b.z) <= tol;
}

bool same_transforms(const SceneState& a, const SceneState& b, double tol) {
  if (a.objects.size() != b.objects.size()) return false;
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    const auto& x = a.objects[i];
    const auto& y = b.objects[i];
    if (x.instance_id != y.instance_id || x.is_layer() || y.is_layer()) return false;
    if (!near(x.box().position, y.box().position, tol) || !near(x.box().rotation_deg, y.box().rotation_deg, tol) ||
        std::abs(x.scale - y.scale) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace

SceneScript emit_scene_script(const std::vector<SceneState>& states, const std::vector<OperationCommand>& commands,
                              const AssetStore& assets) {
  if (states.empty() || states.size() != commands.size() + 1) {
    fail(ErrorCode::InconsistentSequence, "need one more state than commands");
  }
  const SceneState& initial = states.front();
  if (initial.domain != Domain::Syn || !initial.camera) {
    fail(ErrorCode::InconsistentSequence, "scene scripts describe synthetic scenes");
  }
  SceneScript script;
  script.background = initial.background_id;
  script.camera = *initial.camera;
  script.width = initial.width;
  script.height = initial.height;
  script.seed = initial.rng_seed;
  for (const auto& inst : initial.objects) {
    script.instances.emplace_back(inst.instance_id, inst.asset_id);
    script.rounds.push_back({0, inst.instance_id, std::nullopt, transform_of(inst)});
  }
  for (std::size_t i = 0; i < commands.size(); ++i) {
    SceneState expected;
    try {
      expected = apply_operation(states[i], commands[i], assets);
    } catch (const Error& e) {
      fail(ErrorCode::InconsistentSequence, "round " + std::to_string(i + 1) + ": " + e.what());
    }
    if (!same_transforms(expected, states[i + 1], 1e-9)) {
      fail(ErrorCode::InconsistentSequence, "round " + std::to_string(i + 1) + " does not follow from its command");
    }
    const ObjectInstance* inst = states[i + 1].find(commands[i].target_instance_id);
    script.rounds.push_back({static_cast<int>(i + 1), inst->instance_id, commands[i], transform_of(*inst)});
  }
  return script;
}

std::vector<SceneState> replay_scene_script(const SceneScript& script) {
  SceneState state;
  state.domain = Domain::Syn;
  state.background_id = script.background;
  state.width = script.width;
  state.height = script.height;
  state.camera = script.camera;
  state.rng_seed = script.seed;
  for (const auto& [instance_id, asset_id] : script.instances) {
    ObjectInstance inst;
    inst.instance_id = instance_id;
    inst.asset_id = asset_id;
    inst.pose = BoxPose{};
    state.objects.push_back(inst);
  }
  std::vector<SceneState> out;
  int current = 0;
  for (const auto& entry : script.rounds) {
    if (entry.index != current) {
      if (entry.index != current + 1) fail(ErrorCode::InconsistentSequence, "script rounds are not contiguous");
      out.push_back(state);
      current = entry.index;
      state.round = current;
    }
    ObjectInstance* inst = state.find(entry.instance_id);
    if (!inst) fail(ErrorCode::InconsistentSequence, "script names unknown instance '" + entry.instance_id + "'");
    inst->box().position = entry.transform.position;
    inst->box().rotation_deg = entry.transform.rotation_deg;
    inst->scale = entry.transform.scale;
  }
  if (!script.rounds.empty()) out.push_back(state);
  return out;
}

namespace {
json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
Vec3 vec3_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) fail(ErrorCode::SchemaViolation, "expected a 3-vector");
  return {v[0], v[1], v[2]};
}
}  // namespace

json to_json(const SceneScript& script) {
  json rounds = json::array();
  for (const auto& e : script.rounds) {
    json op = nullptr;
    if (e.op) op = json{{"kind", to_string(e.op->kind)}, {"value", e.op->value}};
    rounds.push_back({{"idx", e.index},
                      {"instance", e.instance_id},
                      {"op", op},
                      {"transform",
                       {{"pos", vec3_json(e.transform.position)},
                        {"rot_deg", vec3_json(e.transform.rotation_deg)},
                        {"scale", e.transform.scale}}}});
  }
  json instances = json::array();
  for (const auto& [id, asset] : script.instances) instances.push_back({{"instance", id}, {"asset", asset}});
  return {{"background", script.background},
          {"camera", to_json(script.camera)},
          {"canvas", {script.width, script.height}},
          {"seed", script.seed},
          {"instances", instances},
          {"rounds", rounds}};
}

SceneScript scene_script_from_json(const json& j) {
  try {
    SceneScript s;
    s.background = j.at("background").get<std::string>();
    s.camera = camera_from_json(j.at("camera"));
    s.width = j.at("canvas").at(0).get<int>();
    s.height = j.at("canvas").at(1).get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    for (const auto& inst : j.at("instances")) {
      s.instances.emplace_back(inst.at("instance").get<std::string>(), inst.at("asset").get<std::string>());
    }
    for (const auto& r : j.at("rounds")) {
      ScriptEntry e;
      e.index = r.at("idx").get<int>();
      e.instance_id = r.at("instance").get<std::string>();
      if (!r.at("op").is_null()) {
        OperationCommand cmd;
        cmd.target_instance_id = e.instance_id;
        cmd.kind = op_kind_from_string(r.at("op").at("kind").get<std::string>());
        cmd.value = r.at("op").at("value").get<std::vector<double>>();
        e.op = cmd;
      }
      const json& t = r.at("transform");
      e.transform = {vec3_from(t.at("pos")), vec3_from(t.at("rot_deg")), t.at("scale").get<double>()};
      s.rounds.push_back(std::move(e));
    }
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaViolation, std::string("scene script: ") + e.what());
  }
}

}  // namespace sceneedit
