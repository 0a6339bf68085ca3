// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <stdexcept>

#include "sceneedit/error.hpp"
#include "sceneedit/session.hpp"
#include "support.hpp"

using namespace sceneedit;
using namespace sceneedit::testing;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoFailure;
}

// Records what the session hands over, then defers to the oracle.
class RecordingGenerator : public Generator {
 public:
  Observation generate(const GenerationRequest& request) override {
    requests.push_back(request);
    requests.back().simulated = nullptr;
    return oracle.generate(request);
  }
  std::string_view name() const override { return "recording"; }
  std::vector<GenerationRequest> requests;
  OracleGenerator oracle;
};

class ThrowingGenerator : public Generator {
 public:
  Observation generate(const GenerationRequest&) override { throw std::runtime_error("boom"); }
  std::string_view name() const override { return "throwing"; }
};

class TinyGenerator : public Generator {
 public:
  Observation generate(const GenerationRequest&) override { return {Raster(2, 2), {}}; }
  std::string_view name() const override { return "tiny"; }
};

SceneState two_objects() {
  SceneState s;
  s.domain = Domain::Real;
  s.background_id = "background_0";
  s.width = s.height = 64;
  s.objects = {{"far", "rounded_box", 1.0, LayerPose{{16, 32}, 150}},
               {"near", "ellipse", 1.0, LayerPose{{48, 32}, 40}}};
  return s;
}

}  // namespace

TEST_CASE("history truncation") {
  CHECK(truncate_history(std::vector<int>{1, 2, 3, 4, 5}, 3) == std::vector<int>{3, 4, 5});
  CHECK(truncate_history(std::vector<int>{1, 2}, 3) == std::vector<int>{1, 2});
  CHECK(truncate_history(std::vector<int>{1, 2, 3}, 1) == std::vector<int>{3});
  CHECK(truncate_history(std::vector<int>{}, 4).empty());
}

TEST_CASE("session creation") {
  const AssetStore& assets = demo_assets();
  CHECK(code_of([&] { Session::create(two_objects(), assets, 0); }) == ErrorCode::InvalidN);
  CHECK(code_of([&] { Session::create(Observation{Raster(4, 4), {}}, -1); }) == ErrorCode::InvalidN);
  SceneState bad = two_objects();
  bad.objects[0].layer().depth = 500;
  CHECK(code_of([&] { Session::create(bad, assets, 4); }) == ErrorCode::BoundViolation);

  const Session s = Session::create(two_objects(), assets, 4);
  CHECK(s.round() == 0);
  CHECK(s.frames().size() == 1);
  CHECK(s.records().empty());
  CHECK(s.frames()[0] == render(two_objects(), assets));
}

TEST_CASE("history grows by one pair per round and is capped at N") {
  const AssetStore& assets = demo_assets();
  for (int n : {1, 3, 8}) {
    Session s = Session::create(two_objects(), assets, n);
    RecordingGenerator gen;
    for (int r = 0; r < 6; ++r) {
      const double dx = (r % 2 == 0) ? 4.0 : -4.0;
      s.submit_operation({"near", OpKind::T, {dx, 0.0, 0.0}}, gen, 100 + static_cast<std::uint64_t>(r));
      CHECK(s.round() == r + 1);
      CHECK(s.frames().size() == static_cast<std::size_t>(r + 2));
      CHECK(s.records().size() == static_cast<std::size_t>(r + 1));
      const GenerationRequest& req = gen.requests.back();
      const std::size_t expect = std::min<std::size_t>(static_cast<std::size_t>(r + 1), static_cast<std::size_t>(n));
      CHECK(req.frames.size() == expect);
      CHECK(req.records.size() == expect);
      CHECK(s.last_history_size() == expect);
      CHECK(req.round == r + 1);
      CHECK(req.seed == 100 + static_cast<std::uint64_t>(r));
      // Newest frame is the one just before the edit; newest record is the edit.
      CHECK(req.frames.back() == s.frames()[static_cast<std::size_t>(r)]);
      CHECK(req.records.back() == s.records().back());
      CHECK(req.records.back().round_index == r);
      CHECK(req.target_mask.height == 64);
    }
  }
}

TEST_CASE("oracle generator reproduces direct simulation") {
  const AssetStore& assets = demo_assets();
  Session s = Session::create(two_objects(), assets, 4);
  OracleGenerator gen;
  SceneState direct = two_objects();
  const std::vector<OperationCommand> cmds{{"near", OpKind::T, {-32.0, 0.0, 0.0}},
                                           {"far", OpKind::S, {1.5}},
                                           {"near", OpKind::T, {32.0, 0.0, 0.0}}};
  for (const auto& cmd : cmds) {
    const SceneState before = direct;
    direct = apply_operation(direct, cmd, assets);
    const Observation& frame = s.submit_operation(cmd, gen, 0);
    CHECK(frame == render(direct, assets));
    CHECK(*s.state() == direct);
    CHECK(s.records().back() == make_record(before, direct, cmd, assets));
  }
  CHECK(s.states().size() == 4);
}

TEST_CASE("occluded object reappears unchanged") {
  const AssetStore& assets = demo_assets();
  Session s = Session::create(two_objects(), assets, 2);
  OracleGenerator gen;
  const Observation start = s.frames()[0];
  s.submit_operation({"near", OpKind::T, {-32.0, 0.0, 0.0}}, gen, 0);
  CHECK(s.frames().back().find("far")->visible_fraction < start.find("far")->visible_fraction);
  s.submit_operation({"near", OpKind::T, {32.0, 0.0, 0.0}}, gen, 0);
  CHECK(s.frames().back() == start);
}

TEST_CASE("generator errors") {
  const AssetStore& assets = demo_assets();
  Session s = Session::create(two_objects(), assets, 2);
  ThrowingGenerator bad;
  CHECK(code_of([&] { s.submit_operation({"near", OpKind::S, {1.2}}, bad, 0); }) == ErrorCode::GeneratorFailure);
  TinyGenerator tiny;
  CHECK(code_of([&] { s.submit_operation({"near", OpKind::S, {1.2}}, tiny, 0); }) == ErrorCode::GeneratorFailure);
  OracleGenerator gen;
  CHECK(code_of([&] { s.submit_operation({"ghost", OpKind::S, {1.2}}, gen, 0); }) == ErrorCode::UnknownInstance);
  CHECK(code_of([&] { s.submit_operation({"near", OpKind::S, {9.0}}, gen, 0); }) == ErrorCode::BoundViolation);
  // Failed rounds leave the buffers untouched.
  CHECK(s.round() == 0);
  CHECK(s.frames().size() == 1);
}

TEST_CASE("observation-only sessions need a target box") {
  const AssetStore& assets = demo_assets();
  Session s = Session::create(render(two_objects(), assets), 3);
  CHECK_FALSE(s.state().has_value());
  RecordingGenerator gen;
  CHECK(code_of([&] { s.submit_operation({"near", OpKind::S, {1.2}}, gen, 0); }) == ErrorCode::IllegalCommand);
}

TEST_CASE("network stub exercises the model path") {
  const AssetStore& assets = demo_assets();
  Session s = Session::create(two_objects(), assets, 3);
  NetworkStubGenerator gen;
  OracleGenerator oracle;
  SceneState direct = two_objects();
  for (int r = 0; r < 4; ++r) {
    const OperationCommand cmd{"near", OpKind::T, {r % 2 ? 5.0 : -5.0, 0.0, 2.0}};
    direct = apply_operation(direct, cmd, assets);
    const Observation& frame = s.submit_operation(cmd, gen, 1);
    CHECK(frame == render(direct, assets));
    const StubTrace& t = gen.last_trace();
    CHECK(t.history_pairs == std::min(r + 1, 3));
    CHECK(t.operation_tokens == t.history_pairs + 1);
    CHECK(t.token_dim == 7 * 32);
    CHECK(t.frame_channels == 4 * t.history_pairs + 1);
    CHECK(t.feature_height == 8);
    CHECK(t.feature_width == 8);
    CHECK(t.finite);
  }
  NetworkStubGenerator::Options bad;
  bad.feature_size = 6;
  CHECK(code_of([&] { NetworkStubGenerator g(bad); }) == ErrorCode::InvalidConfig);
}
