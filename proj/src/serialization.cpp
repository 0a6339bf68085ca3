// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/serialization.hpp"

#include "sceneedit/error.hpp"

namespace sceneedit {

using nlohmann::json;

namespace {

json vec2(const Vec2& v) { return json::array({v.x, v.y}); }
json vec3(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json norm_point(const NormPoint& p) { return json::array({p.u, p.v}); }
json norm_box(const NormBox& b) { return json::array({b.u0, b.v0, b.u1, b.v1}); }
json box(const BoxD& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

std::vector<double> numbers(const json& j, std::size_t n) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != n) fail(ErrorCode::SchemaViolation, "expected " + std::to_string(n) + " numbers");
  return v;
}

Vec2 vec2_from(const json& j) {
  const auto v = numbers(j, 2);
  return {v[0], v[1]};
}
Vec3 vec3_from(const json& j) {
  const auto v = numbers(j, 3);
  return {v[0], v[1], v[2]};
}
NormPoint norm_point_from(const json& j) {
  const auto v = numbers(j, 2);
  return {v[0], v[1]};
}
NormBox norm_box_from(const json& j) {
  const auto v = numbers(j, 4);
  return {v[0], v[1], v[2], v[3]};
}
BoxD box_from(const json& j) {
  const auto v = numbers(j, 4);
  return {v[0], v[1], v[2], v[3]};
}

// Wraps nlohmann type/key errors as schema violations.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaViolation, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const Camera& c) {
  return {{"position", vec3(c.position)},
          {"look_at", vec3(c.look_at)},
          {"vfov_deg", c.vfov_deg},
          {"near", c.near_plane},
          {"far", c.far_plane}};
}

Camera camera_from_json(const json& j) {
  return guarded("camera", [&] {
    Camera c;
    c.position = vec3_from(j.at("position"));
    c.look_at = vec3_from(j.at("look_at"));
    c.vfov_deg = j.at("vfov_deg").get<double>();
    c.near_plane = j.at("near").get<double>();
    c.far_plane = j.at("far").get<double>();
    return c;
  });
}

json to_json(const SceneState& s) {
  json objects = json::array();
  for (const auto& o : s.objects) {
    json jo{{"instance_id", o.instance_id}, {"asset_id", o.asset_id}, {"scale", o.scale}};
    if (o.is_layer()) {
      jo["center_px"] = vec2(o.layer().center_px);
      jo["depth"] = o.layer().depth;
    } else {
      jo["position"] = vec3(o.box().position);
      jo["rotation_deg"] = vec3(o.box().rotation_deg);
    }
    objects.push_back(std::move(jo));
  }
  json out{{"domain", to_string(s.domain)},
           {"background_id", s.background_id},
           {"canvas", {s.width, s.height}},
           {"objects", objects},
           {"rng_seed", s.rng_seed},
           {"round", s.round}};
  if (s.camera) out["camera"] = to_json(*s.camera);
  return out;
}

SceneState scene_state_from_json(const json& j) {
  return guarded("scene state", [&] {
    SceneState s;
    s.domain = domain_from_string(j.at("domain").get<std::string>());
    s.background_id = j.at("background_id").get<std::string>();
    s.width = j.at("canvas").at(0).get<int>();
    s.height = j.at("canvas").at(1).get<int>();
    s.rng_seed = j.value("rng_seed", std::uint64_t{0});
    s.round = j.value("round", 0);
    if (j.contains("camera")) s.camera = camera_from_json(j.at("camera"));
    for (const auto& jo : j.at("objects")) {
      ObjectInstance o;
      o.instance_id = jo.at("instance_id").get<std::string>();
      o.asset_id = jo.at("asset_id").get<std::string>();
      o.scale = jo.at("scale").get<double>();
      if (jo.contains("center_px")) {
        o.pose = LayerPose{vec2_from(jo.at("center_px")), jo.at("depth").get<double>()};
      } else {
        o.pose = BoxPose{vec3_from(jo.at("position")), vec3_from(jo.at("rotation_deg"))};
      }
      s.objects.push_back(std::move(o));
    }
    return s;
  });
}

json to_json(const OperationCommand& c) {
  return {{"instance_id", c.target_instance_id}, {"kind", to_string(c.kind)}, {"value", c.value}};
}

OperationCommand operation_command_from_json(const json& j) {
  return guarded("operation", [&] {
    OperationCommand c;
    c.target_instance_id = j.at("instance_id").get<std::string>();
    c.kind = op_kind_from_string(j.at("kind").get<std::string>());
    const json& v = j.at("value");
    c.value = v.is_number() ? std::vector<double>{v.get<double>()} : v.get<std::vector<double>>();
    return c;
  });
}

json to_json(const OperationRecord& r) {
  return {{"op", to_json(r.command)},
          {"round", r.round_index},
          {"source_centroid", norm_point(r.source_centroid)},
          {"source_bbox", norm_box(r.source_bbox)},
          {"target_bbox", norm_box(r.target_bbox)}};
}

OperationRecord operation_record_from_json(const json& j) {
  return guarded("operation record", [&] {
    OperationRecord r;
    r.command = operation_command_from_json(j.at("op"));
    r.round_index = j.at("round").get<int>();
    r.source_centroid = norm_point_from(j.at("source_centroid"));
    r.source_bbox = norm_box_from(j.at("source_bbox"));
    r.target_bbox = norm_box_from(j.at("target_bbox"));
    return r;
  });
}

json to_json(const Annotation& a) {
  return {{"instance_id", a.instance_id},
          {"bbox_px", box(a.bbox_px)},
          {"full_bbox_px", box(a.full_bbox_px)},
          {"centroid_px", vec2(a.centroid_px)},
          {"visible_fraction", a.visible_fraction},
          {"depth_rank", a.depth_rank}};
}

Annotation annotation_from_json(const json& j) {
  return guarded("annotation", [&] {
    Annotation a;
    a.instance_id = j.at("instance_id").get<std::string>();
    a.bbox_px = box_from(j.at("bbox_px"));
    a.full_bbox_px = box_from(j.at("full_bbox_px"));
    a.centroid_px = vec2_from(j.at("centroid_px"));
    a.visible_fraction = j.at("visible_fraction").get<double>();
    a.depth_rank = j.at("depth_rank").get<int>();
    return a;
  });
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace sceneedit
