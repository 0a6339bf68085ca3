// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "sceneedit/error.hpp"
#include "sceneedit/planner_syn.hpp"
#include "sceneedit/render_real.hpp"

namespace sceneedit {

using nlohmann::json;

void SamplerConfig::validate() const {
  auto check = [](const Interval& i, const char* name) {
    if (!(i.lo <= i.hi) || !std::isfinite(i.lo) || !std::isfinite(i.hi)) {
      fail(ErrorCode::InvalidConfig, std::string(name) + " must satisfy lo <= hi");
    }
  };
  check(center_offset_frac, "center_offset_frac");
  check(depth_offset, "depth_offset");
  check(depth_range, "depth_range");
  check(scale_range, "scale_range");
  check(scale_step, "scale_step");
  check(angle_x, "angle_x");
  check(angle_y, "angle_y");
  check(angle_z, "angle_z");
  if (!(depth_range.lo < depth_range.hi)) fail(ErrorCode::InvalidConfig, "depth_range must be non-empty");
  if (!(scale_range.lo > 0.0) || !(scale_step.lo > 0.0)) fail(ErrorCode::InvalidConfig, "scales must be positive");
  if (seq_len < 0) fail(ErrorCode::InvalidConfig, "seq_len must be non-negative");
  if (r_min < 1 || r_min > r_max) fail(ErrorCode::InvalidConfig, "need 1 <= r_min <= r_max");
  if (objects_real.first < 1 || objects_real.first > objects_real.second || objects_syn.first < 1 ||
      objects_syn.first > objects_syn.second) {
    fail(ErrorCode::InvalidConfig, "object count ranges must satisfy 1 <= lo <= hi");
  }
  if (value_attempts < 1 || pair_attempts < 1) fail(ErrorCode::InvalidConfig, "attempt caps must be positive");
  if (!(translate_radius_frac > 0.0)) fail(ErrorCode::InvalidConfig, "translate_radius_frac must be positive");
}

TransitionLimits SamplerConfig::limits() const {
  TransitionLimits l;
  l.depth_min = depth_range.lo;
  l.depth_max = depth_range.hi;
  l.scale_min = scale_range.lo;
  l.scale_max = scale_range.hi;
  l.step_scale_min = scale_step.lo;
  l.step_scale_max = scale_step.hi;
  l.angle_x = std::max(std::abs(angle_x.lo), std::abs(angle_x.hi));
  l.angle_y = std::max(std::abs(angle_y.lo), std::abs(angle_y.hi));
  l.angle_z = std::max(std::abs(angle_z.lo), std::abs(angle_z.hi));
  return l;
}

namespace {

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Interval interval_from(const json& j, const char* key) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) fail(ErrorCode::InvalidConfig, std::string(key) + " must be [lo, hi]");
  return {v[0], v[1]};
}

std::pair<int, int> int_pair_from(const json& j, const char* key) {
  const auto v = j.get<std::vector<int>>();
  if (v.size() != 2) fail(ErrorCode::InvalidConfig, std::string(key) + " must be [lo, hi]");
  return {v[0], v[1]};
}

}  // namespace

json to_json(const SamplerConfig& c) {
  return {{"seq_len", c.seq_len},
          {"center_offset_frac", interval_json(c.center_offset_frac)},
          {"depth_offset", interval_json(c.depth_offset)},
          {"depth_range", interval_json(c.depth_range)},
          {"scale_range", interval_json(c.scale_range)},
          {"scale_step", interval_json(c.scale_step)},
          {"angle_x", interval_json(c.angle_x)},
          {"angle_y", interval_json(c.angle_y)},
          {"angle_z", interval_json(c.angle_z)},
          {"translate_radius_frac", c.translate_radius_frac},
          {"r_min", c.r_min},
          {"r_max", c.r_max},
          {"objects_real", {c.objects_real.first, c.objects_real.second}},
          {"objects_syn", {c.objects_syn.first, c.objects_syn.second}},
          {"value_attempts", c.value_attempts},
          {"pair_attempts", c.pair_attempts},
          {"seed", c.seed}};
}

SamplerConfig sampler_config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidConfig, "sampler config must be a JSON object");
  SamplerConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seq_len") c.seq_len = value.get<int>();
      else if (key == "center_offset_frac") c.center_offset_frac = interval_from(value, "center_offset_frac");
      else if (key == "depth_offset") c.depth_offset = interval_from(value, "depth_offset");
      else if (key == "depth_range") c.depth_range = interval_from(value, "depth_range");
      else if (key == "scale_range") c.scale_range = interval_from(value, "scale_range");
      else if (key == "scale_step") c.scale_step = interval_from(value, "scale_step");
      else if (key == "angle_x") c.angle_x = interval_from(value, "angle_x");
      else if (key == "angle_y") c.angle_y = interval_from(value, "angle_y");
      else if (key == "angle_z") c.angle_z = interval_from(value, "angle_z");
      else if (key == "translate_radius_frac") c.translate_radius_frac = value.get<double>();
      else if (key == "r_min") c.r_min = value.get<int>();
      else if (key == "r_max") c.r_max = value.get<int>();
      else if (key == "objects_real") c.objects_real = int_pair_from(value, "objects_real");
      else if (key == "objects_syn") c.objects_syn = int_pair_from(value, "objects_syn");
      else if (key == "value_attempts") c.value_attempts = value.get<int>();
      else if (key == "pair_attempts") c.pair_attempts = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else fail(ErrorCode::InvalidConfig, "unknown sampler config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, std::string("sampler config: ") + e.what());
  }
  c.validate();
  return c;
}

SamplerConfig load_sampler_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  try {
    return sampler_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

std::string config_hash(const SamplerConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json(cfg).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool command_within_bounds(const SceneState& state, const OperationCommand& cmd, const SamplerConfig& cfg,
                           std::string* why) {
  auto reject = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (cmd.value.size() != value_arity(state.domain, cmd.kind)) return reject("wrong value arity");
  const double l = state.shortest_side();
  if (state.domain == Domain::Real) {
    if (cmd.kind == OpKind::T) {
      const Interval offset{cfg.center_offset_frac.lo * l, cfg.center_offset_frac.hi * l};
      if (!offset.contains(cmd.value[0]) || !offset.contains(cmd.value[1])) return reject("center offset out of bounds");
      if (!cfg.depth_offset.contains(cmd.value[2])) return reject("depth offset out of bounds");
    } else if (cmd.kind == OpKind::S) {
      if (!(cmd.value[0] > 0.0)) return reject("scale multiplier must be positive");
    } else {
      return reject("rotation in the realistic domain");
    }
    return true;
  }
  switch (cmd.kind) {
    case OpKind::T: {
      const double radius = cfg.translate_radius_frac * kGroundExtent;
      if (std::hypot(cmd.value[0], cmd.value[1]) > radius) return reject("translation leaves the ground disk");
      return true;
    }
    case OpKind::S: return cfg.scale_step.contains(cmd.value[0]) || reject("scale step out of bounds");
    case OpKind::X: return cfg.angle_x.contains(cmd.value[0]) || reject("x rotation out of bounds");
    case OpKind::Y: return cfg.angle_y.contains(cmd.value[0]) || reject("y rotation out of bounds");
    case OpKind::Z: return cfg.angle_z.contains(cmd.value[0]) || reject("z rotation out of bounds");
  }
  return true;
}

namespace {

std::vector<double> draw_value(const SceneState& state, const ObjectInstance& inst, OpKind kind,
                               const SamplerConfig& cfg, Rng& rng) {
  const double l = state.shortest_side();
  if (state.domain == Domain::Real) {
    if (kind == OpKind::T) {
      return {rng.uniform(cfg.center_offset_frac.lo * l, cfg.center_offset_frac.hi * l),
              rng.uniform(cfg.center_offset_frac.lo * l, cfg.center_offset_frac.hi * l),
              rng.uniform(cfg.depth_offset.lo, cfg.depth_offset.hi)};
    }
    // Log-uniform over the multipliers that keep f_s inside its bounds.
    return {rng.log_uniform(cfg.scale_range.lo / inst.scale, cfg.scale_range.hi / inst.scale)};
  }
  switch (kind) {
    case OpKind::T: {
      const double radius = cfg.translate_radius_frac * kGroundExtent * std::sqrt(rng.uniform01());
      const double theta = 2.0 * std::numbers::pi * rng.uniform01();
      return {radius * std::cos(theta), radius * std::sin(theta)};
    }
    case OpKind::S: {
      const double lo = std::max(cfg.scale_step.lo, cfg.scale_range.lo / inst.scale);
      const double hi = std::min(cfg.scale_step.hi, cfg.scale_range.hi / inst.scale);
      return {rng.log_uniform(lo, std::max(lo, hi))};
    }
    case OpKind::X: return {rng.uniform(cfg.angle_x.lo, cfg.angle_x.hi)};
    case OpKind::Y: return {rng.uniform(cfg.angle_y.lo, cfg.angle_y.hi)};
    case OpKind::Z: return {rng.uniform(cfg.angle_z.lo, cfg.angle_z.hi)};
  }
  return {};
}

bool recoverable(ErrorCode code) {
  switch (code) {
    case ErrorCode::BoundViolation:
    case ErrorCode::CollisionViolation:
    case ErrorCode::FrustumViolation:
    case ErrorCode::SubpixelSize:
    case ErrorCode::DegenerateFootprint:
      return true;
    default:
      return false;
  }
}

// Rejects layer poses whose render would be empty or sub-pixel.
void check_renderable(const SceneState& next, const ObjectInstance& inst, const AssetStore& assets) {
  if (next.domain != Domain::Real) return;
  const SizeConfig size_cfg = SizeConfig::for_canvas(next.width, next.height);
  const double size = compute_object_size(inst.layer().depth, inst.scale, size_cfg);
  if (size < 1.0) fail(ErrorCode::SubpixelSize, "object below one pixel");
  if (size < 8.0) derive_source_region(next, inst.instance_id, assets);
}

}  // namespace

OperationCommand sample_command(const SceneState& state, const AssetStore& assets, const SamplerConfig& cfg,
                                Rng& rng) {
  if (state.objects.empty()) fail(ErrorCode::SamplingExhausted, "scene has no objects");
  const TransitionLimits limits = cfg.limits();
  const auto kinds = legal_kinds(state.domain);
  for (int pair = 0; pair < cfg.pair_attempts; ++pair) {
    const ObjectInstance& inst = state.objects[rng.index(state.objects.size())];
    const OpKind kind = kinds[rng.index(kinds.size())];
    for (int attempt = 0; attempt < cfg.value_attempts; ++attempt) {
      OperationCommand cmd{inst.instance_id, kind, draw_value(state, inst, kind, cfg, rng)};
      if (!command_within_bounds(state, cmd, cfg)) continue;
      try {
        const SceneState next = apply_operation(state, cmd, assets, limits);
        check_renderable(next, *next.find(inst.instance_id), assets);
        return cmd;
      } catch (const Error& e) {
        if (!recoverable(e.code())) throw;
      }
    }
  }
  fail(ErrorCode::SamplingExhausted, "no valid command after " + std::to_string(cfg.pair_attempts) + " pairs");
}

SceneState sample_initial_scene(Domain domain, const AssetStore& assets, int width, int height,
                                const SamplerConfig& cfg, Rng& rng) {
  std::vector<const ObjectAsset*> backgrounds;
  std::vector<const ObjectAsset*> objects;
  for (const ObjectAsset* a : assets.of_kind(AssetKind::Layer2d)) {
    (a->has_tag("background") ? backgrounds : objects).push_back(a);
  }
  if (domain == Domain::Syn) objects = assets.of_kind(AssetKind::Box3d);
  if (objects.empty()) fail(ErrorCode::MissingAsset, "no object assets for the " + std::string(to_string(domain)) + " domain");
  if (domain == Domain::Real && backgrounds.empty()) fail(ErrorCode::MissingAsset, "no background assets");

  const std::string background =
      backgrounds.empty() ? std::string("studio") : backgrounds[rng.index(backgrounds.size())]->id;
  if (domain == Domain::Syn) {
    const int count = static_cast<int>(rng.uniform_int(cfg.objects_syn.first, cfg.objects_syn.second));
    std::vector<std::string> ids;
    for (int i = 0; i < count; ++i) ids.push_back(objects[rng.index(objects.size())]->id);
    return place_objects(background, ids, assets, width, height, rng, default_camera(), cfg.value_attempts);
  }

  SceneState state;
  state.domain = Domain::Real;
  state.background_id = background;
  state.width = width;
  state.height = height;
  const SizeConfig size_cfg = SizeConfig::for_canvas(width, height, cfg.limits());
  const int count = static_cast<int>(rng.uniform_int(cfg.objects_real.first, cfg.objects_real.second));
  for (int i = 0; i < count; ++i) {
    ObjectInstance inst;
    inst.instance_id = "obj" + std::to_string(i);
    inst.asset_id = objects[rng.index(objects.size())]->id;
    inst.scale = 1.0;
    bool ok = false;
    for (int attempt = 0; attempt < cfg.value_attempts && !ok; ++attempt) {
      inst.pose = LayerPose{{rng.uniform(0.0, width), rng.uniform(0.0, height)},
                            rng.uniform(cfg.depth_range.lo, cfg.depth_range.hi)};
      ok = compute_object_size(inst.layer().depth, inst.scale, size_cfg) >= 1.0;
    }
    if (!ok) fail(ErrorCode::SamplingExhausted, "canvas too small for visible objects");
    state.objects.push_back(inst);
  }
  return state;
}

namespace {

NormBox footprint_of(const Observation& obs, const std::string& id, int width, int height) {
  const Annotation* a = obs.find(id);
  if (!a) fail(ErrorCode::UnknownInstance, "frame has no annotation for '" + id + "'");
  return normalize_box(a->full_bbox_px, width, height);
}

}  // namespace

Sequence build_sequence(const SceneState& initial, const AssetStore& assets, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  Sequence seq;
  seq.seed = initial.rng_seed;
  seq.states.push_back(initial);
  seq.frames.push_back(render(initial, assets));
  const TransitionLimits limits = cfg.limits();
  for (int i = 0; i < cfg.seq_len; ++i) {
    const SceneState& current = seq.states.back();
    OperationCommand cmd;
    try {
      cmd = sample_command(current, assets, cfg, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SamplingExhausted) throw;
      seq.truncated = true;
      break;
    }
    SceneState next = apply_operation(current, cmd, assets, limits);
    Observation frame = render(next, assets);
    // Source and target regions come from the rendered footprints, which
    // are the same rasterization derive_source_region performs.
    OperationRecord record;
    record.command = cmd;
    record.source_bbox = footprint_of(seq.frames.back(), cmd.target_instance_id, current.width, current.height);
    record.source_centroid = record.source_bbox.center();
    record.target_bbox = footprint_of(frame, cmd.target_instance_id, next.width, next.height);
    record.round_index = current.round;
    seq.records.push_back(std::move(record));
    seq.states.push_back(std::move(next));
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

Sequence generate_sequence(Domain domain, const AssetStore& assets, int width, int height, const SamplerConfig& cfg,
                           std::uint64_t seed) {
  Rng rng(seed);
  SceneState initial = sample_initial_scene(domain, assets, width, height, cfg, rng);
  initial.rng_seed = seed;
  Sequence seq = build_sequence(initial, assets, cfg, rng);
  char id[64];
  std::snprintf(id, sizeof id, "%s_%06llu", std::string(to_string(domain)).c_str(),
                static_cast<unsigned long long>(seed));
  seq.id = id;
  seq.seed = seed;
  return seq;
}

TrainingWindow sample_training_window(const Sequence& sequence, Rng& rng, int r_min, int r_max) {
  if (r_min < 1 || r_min > r_max) fail(ErrorCode::InvalidConfig, "need 1 <= r_min <= r_max");
  const std::size_t frames = sequence.frames.size();
  if (frames < static_cast<std::size_t>(r_max) + 1) {
    fail(ErrorCode::SequenceTooShort, "sequence has " + std::to_string(frames) + " frames, need " +
                                          std::to_string(r_max + 1));
  }
  TrainingWindow w;
  w.r = static_cast<int>(rng.uniform_int(r_min, r_max));
  const auto r = static_cast<std::size_t>(w.r);
  const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(frames - 1 - r)));
  w.history.start = start;
  w.history.frames.assign(sequence.frames.begin() + static_cast<std::ptrdiff_t>(start),
                          sequence.frames.begin() + static_cast<std::ptrdiff_t>(start + r));
  w.history.records.assign(sequence.records.begin() + static_cast<std::ptrdiff_t>(start),
                           sequence.records.begin() + static_cast<std::ptrdiff_t>(start + r));
  w.target = sequence.frames[start + r];
  return w;
}

}  // namespace sceneedit
