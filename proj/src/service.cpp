// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/service.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <regex>

#include "sceneedit/dataset_io.hpp"
#include "sceneedit/planner_syn.hpp"
#include "sceneedit/sampler.hpp"
#include "sceneedit/serialization.hpp"
#include "sceneedit/session.hpp"

namespace sceneedit {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) fail(ErrorCode::InvalidConfig, "port must be in [1, 65535]");
  if (width < 1 || height < 1) fail(ErrorCode::InvalidConfig, "canvas must be positive");
  if (max_history < 1) fail(ErrorCode::InvalidN, "max history must be at least 1");
  if (generator != "oracle" && generator != "network-stub") {
    fail(ErrorCode::InvalidConfig, "generator must be 'oracle' or 'network-stub'");
  }
  if (idle_ttl.count() < 1) fail(ErrorCode::InvalidConfig, "idle TTL must be positive");
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::MissingFrame:
      return 404;
    case ErrorCode::SchemaViolation:
      return 400;
    case ErrorCode::IoFailure:
    case ErrorCode::GeneratorFailure:
      return 500;
    default:
      return 422;
  }
}

namespace {

struct SessionEntry {
  std::mutex mutex;
  Session session;
  std::unique_ptr<Generator> generator;
  std::uint64_t seed = 0;
  Clock::time_point last_used;

  SessionEntry(Session s, std::unique_ptr<Generator> g, std::uint64_t sd)
      : session(std::move(s)), generator(std::move(g)), seed(sd), last_used(Clock::now()) {}
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code), {{"code", std::string(error_code_name(code))}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) fail(ErrorCode::SchemaViolation, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::SchemaViolation, std::string("malformed JSON: ") + e.what());
  }
}

json annotations_json(const Observation& obs) {
  json list = json::array();
  for (const auto& a : obs.annotations) list.push_back(to_json(a));
  return list;
}

std::string frame_url(const std::string& id, int round) {
  return "/api/v1/session/" + id + "/frame/" + std::to_string(round) + ".png";
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::SchemaViolation, e.what());
    }
  };
}

}  // namespace

struct SessionService::Impl {
  ServiceConfig config;
  AssetStore assets;
  httplib::Server server;
  mutable std::mutex mutex;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
  std::uint64_t next_id = 1;
  const SamplerConfig bounds{};

  Impl(ServiceConfig c, AssetStore a) : config(std::move(c)), assets(std::move(a)) {}

  std::shared_ptr<SessionEntry> lookup(const std::string& id) {
    std::lock_guard lock(mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) fail(ErrorCode::UnknownSession, "no session '" + id + "'");
    return it->second;
  }

  std::size_t expire(Clock::time_point now) {
    std::lock_guard lock(mutex);
    std::size_t dropped = 0;
    for (auto it = sessions.begin(); it != sessions.end();) {
      std::unique_lock entry_lock(it->second->mutex, std::try_to_lock);
      if (entry_lock.owns_lock() && now - it->second->last_used > config.idle_ttl) {
        entry_lock.unlock();
        it = sessions.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
    return dropped;
  }

  std::unique_ptr<Generator> make_generator(std::uint64_t seed) const {
    if (config.generator == "network-stub") {
      NetworkStubGenerator::Options options;
      options.seed = seed;
      return std::make_unique<NetworkStubGenerator>(options);
    }
    return std::make_unique<OracleGenerator>();
  }

  SceneState build_scene(const json& body, std::uint64_t seed) const {
    int width = config.width;
    int height = config.height;
    if (body.contains("canvas")) {
      const auto c = body.at("canvas").get<std::vector<int>>();
      if (c.size() != 2 || c[0] < 1 || c[1] < 1) fail(ErrorCode::SchemaViolation, "canvas must be [width, height]");
      width = c[0];
      height = c[1];
    }
    const auto& objects = body.at("objects");
    if (!objects.is_array() || objects.empty()) fail(ErrorCode::SchemaViolation, "objects must be a non-empty array");
    std::vector<std::string> asset_ids;
    bool all_init = true;
    for (const auto& o : objects) {
      asset_ids.push_back(o.at("asset_id").get<std::string>());
      all_init = all_init && o.contains("init");
    }
    const ObjectAsset& first = assets.at(asset_ids.front());
    const Domain domain = first.kind == AssetKind::Box3d ? Domain::Syn : Domain::Real;
    for (const auto& id : asset_ids) {
      if ((assets.at(id).kind == AssetKind::Box3d) != (domain == Domain::Syn)) {
        fail(ErrorCode::IllegalKindForDomain, "objects mix layer and box assets");
      }
    }
    std::string background = body.value("background_id", std::string());
    if (domain == Domain::Real) {
      if (background.empty()) fail(ErrorCode::SchemaViolation, "background_id is required");
      assets.at(background);
    } else if (background.empty()) {
      background = "studio";
    }

    Rng rng(seed);
    if (domain == Domain::Syn && !all_init) {
      return place_objects(background, asset_ids, assets, width, height, rng);
    }
    SceneState state;
    state.domain = domain;
    state.background_id = background;
    state.width = width;
    state.height = height;
    state.rng_seed = seed;
    if (domain == Domain::Syn) state.camera = default_camera();
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const json& o = objects[i];
      ObjectInstance inst;
      inst.instance_id = "obj" + std::to_string(i);
      inst.asset_id = asset_ids[i];
      const json init = o.value("init", json::object());
      inst.scale = init.value("scale", 1.0);
      if (domain == Domain::Real) {
        Vec2 center{rng.uniform(0.25 * width, 0.75 * width), rng.uniform(0.25 * height, 0.75 * height)};
        double depth = rng.uniform(50.0, 150.0);
        if (init.contains("center_px")) {
          const auto c = init.at("center_px").get<std::vector<double>>();
          if (c.size() != 2) fail(ErrorCode::SchemaViolation, "center_px must be [x, y]");
          center = {c[0], c[1]};
        }
        depth = init.value("depth", depth);
        inst.pose = LayerPose{center, depth};
      } else {
        const auto p = init.at("position").get<std::vector<double>>();
        const auto r = init.value("rotation_deg", std::vector<double>{0.0, 0.0, 0.0});
        if (p.size() != 3 || r.size() != 3) fail(ErrorCode::SchemaViolation, "position and rotation_deg take 3 values");
        inst.pose = BoxPose{{p[0], p[1], p[2]}, {r[0], r[1], r[2]}};
        inst = grounded(inst, assets.at(inst.asset_id));
      }
      state.objects.push_back(std::move(inst));
    }
    if (const auto problems = validate_state(state, assets); !problems.empty()) {
      fail(ErrorCode::BoundViolation, problems.front());
    }
    return state;
  }

  void create_session(const httplib::Request& req, httplib::Response& res) {
    expire(Clock::now());
    const json body = parse_body(req);
    std::string id;
    std::uint64_t seed;
    {
      std::lock_guard lock(mutex);
      seed = config.seed + next_id;
      char buf[32];
      std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_id++));
      id = buf;
    }
    const int n = body.value("N", config.max_history);
    SceneState scene = build_scene(body, seed);
    auto entry = std::make_shared<SessionEntry>(Session::create(std::move(scene), assets, n), make_generator(seed), seed);
    const Observation& frame = entry->session.frames().front();
    json instances = json::array();
    for (const auto& inst : entry->session.state()->objects) {
      instances.push_back({{"instance_id", inst.instance_id}, {"asset_id", inst.asset_id}});
    }
    const json out = {{"session_id", id},
                      {"frame_url", frame_url(id, 0)},
                      {"round", 0},
                      {"domain", std::string(to_string(entry->session.state()->domain))},
                      {"canvas", {frame.image.width(), frame.image.height()}},
                      {"max_history", n},
                      {"instances", instances},
                      {"annotations", annotations_json(frame)}};
    {
      std::lock_guard lock(mutex);
      sessions[id] = std::move(entry);
    }
    send_json(res, 200, out);
  }

  void submit_op(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto entry = lookup(id);
    const json body = parse_body(req);
    const OperationCommand cmd = operation_command_from_json(body);
    std::optional<NormBox> target;
    if (body.contains("target_bbox") && !body.at("target_bbox").is_null()) {
      const auto b = body.at("target_bbox").get<std::vector<double>>();
      if (b.size() != 4) fail(ErrorCode::SchemaViolation, "target_bbox must be [u0, v0, u1, v1]");
      target = NormBox{b[0], b[1], b[2], b[3]};
    }
    std::lock_guard lock(entry->mutex);
    entry->last_used = Clock::now();
    const SceneState& state = *entry->session.state();
    if (state.find(cmd.target_instance_id) == nullptr) {
      fail(ErrorCode::UnknownInstance, "no instance '" + cmd.target_instance_id + "'");
    }
    const auto legal = legal_kinds(state.domain);
    if (std::find(legal.begin(), legal.end(), cmd.kind) == legal.end()) {
      fail(ErrorCode::IllegalKindForDomain,
           std::string(to_string(cmd.kind)) + " is not legal in the " + std::string(to_string(state.domain)) + " domain");
    }
    std::string why;
    if (!command_within_bounds(state, cmd, bounds, &why)) fail(ErrorCode::BoundViolation, why);
    const std::uint64_t round_seed = entry->seed * 1000003ULL + static_cast<std::uint64_t>(entry->session.round());
    const Observation& frame = entry->session.submit_operation(cmd, *entry->generator, round_seed, target);
    const int round = entry->session.round();
    send_json(res, 200,
              {{"round", round},
               {"frame_url", frame_url(id, round)},
               {"record", to_json(entry->session.records().back())},
               {"annotations", annotations_json(frame)}});
  }

  void get_frame(const httplib::Request& req, httplib::Response& res) {
    auto entry = lookup(req.matches[1]);
    const int round = std::stoi(req.matches[2]);
    std::vector<std::uint8_t> png;
    {
      std::lock_guard lock(entry->mutex);
      entry->last_used = Clock::now();
      const auto& frames = entry->session.frames();
      if (round < 0 || static_cast<std::size_t>(round) >= frames.size()) {
        fail(ErrorCode::MissingFrame, "no frame for round " + std::to_string(round));
      }
      png = encode_png(frames[static_cast<std::size_t>(round)].image);
    }
    res.status = 200;
    res.set_content(std::string(png.begin(), png.end()), "image/png");
  }

  void get_history(const httplib::Request& req, httplib::Response& res) {
    auto entry = lookup(req.matches[1]);
    std::lock_guard lock(entry->mutex);
    entry->last_used = Clock::now();
    json rounds = json::array();
    for (const auto& r : entry->session.records()) rounds.push_back(to_json(r));
    json frames = json::array();
    for (std::size_t i = 0; i < entry->session.frames().size(); ++i) {
      frames.push_back({{"round", i},
                        {"frame_url", frame_url(req.matches[1], static_cast<int>(i))},
                        {"annotations", annotations_json(entry->session.frames()[i])}});
    }
    send_json(res, 200,
              {{"round", entry->session.round()},
               {"max_history", entry->session.max_history()},
               {"rounds", std::move(rounds)},
               {"frames", std::move(frames)}});
  }

  void export_session(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto entry = lookup(id);
    const json body = parse_body(req);
    const std::string name = body.value("out_name", id);
    static const std::regex safe("[A-Za-z0-9_-]{1,64}");
    if (!std::regex_match(name, safe)) fail(ErrorCode::SchemaViolation, "out_name must match [A-Za-z0-9_-]{1,64}");
    Sequence seq;
    {
      std::lock_guard lock(entry->mutex);
      entry->last_used = Clock::now();
      seq.id = name;
      seq.seed = entry->seed;
      seq.states = entry->session.states();
      seq.frames = entry->session.frames();
      seq.records = entry->session.records();
    }
    ExportContext ctx;
    ctx.asset_dir = std::filesystem::absolute(config.asset_dir).string();
    ctx.config = bounds;
    ctx.assets = &assets;
    static std::mutex manifest_mutex;  // one manifest writer at a time
    std::lock_guard lock(manifest_mutex);
    export_sequence(seq, config.export_dir, ctx);
    send_json(res, 200,
              {{"manifest_path", (config.export_dir / "manifest.json").string()},
               {"sequence_dir", (config.export_dir / name).string()}});
  }

  void delete_session(const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mutex);
    if (sessions.erase(req.matches[1]) == 0) fail(ErrorCode::UnknownSession, "no session '" + std::string(req.matches[1]) + "'");
    res.status = 204;
  }

  void install_routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.Post("/api/v1/session", guarded([this](const auto& q, auto& r) { create_session(q, r); }));
    server.Post(R"(/api/v1/session/([^/]+)/op)", guarded([this](const auto& q, auto& r) { submit_op(q, r); }));
    server.Get(R"(/api/v1/session/([^/]+)/frame/(\d+)\.png)", guarded([this](const auto& q, auto& r) { get_frame(q, r); }));
    server.Get(R"(/api/v1/session/([^/]+)/history)", guarded([this](const auto& q, auto& r) { get_history(q, r); }));
    server.Post(R"(/api/v1/session/([^/]+)/export)", guarded([this](const auto& q, auto& r) { export_session(q, r); }));
    server.Delete(R"(/api/v1/session/([^/]+))", guarded([this](const auto& q, auto& r) { delete_session(q, r); }));
    server.Get("/api/v1/assets", guarded([this](const auto&, auto& r) { send_json(r, 200, assets.index_json()); }));
  }
};

SessionService::SessionService(ServiceConfig config, AssetStore assets)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(assets))) {
  impl_->config.validate();
  impl_->install_routes();
}

SessionService::~SessionService() { stop(); }

int SessionService::bind() {
  int port;
  if (impl_->config.port == 0) {
    port = impl_->server.bind_to_any_port(impl_->config.host);
  } else {
    port = impl_->server.bind_to_port(impl_->config.host, impl_->config.port) ? impl_->config.port : -1;
  }
  if (port <= 0) fail(ErrorCode::IoFailure, "cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  return port;
}

void SessionService::run() { impl_->server.listen_after_bind(); }

void SessionService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

std::size_t SessionService::session_count() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->sessions.size();
}

std::size_t SessionService::expire_idle(Clock::time_point now) { return impl_->expire(now); }

}  // namespace sceneedit
