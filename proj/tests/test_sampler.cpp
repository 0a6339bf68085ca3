// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "sceneedit/error.hpp"
#include "sceneedit/sampler.hpp"
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

}  // namespace

TEST_CASE("realistic commands stay within the sampling bounds") {
  const AssetStore& assets = demo_assets();
  SamplerConfig cfg;
  Rng rng(1);
  SceneState s = sample_initial_scene(Domain::Real, assets, 512, 512, cfg, rng);
  std::set<OpKind> kinds;
  for (int i = 0; i < 10000; ++i) {
    const OperationCommand cmd = sample_command(s, assets, cfg, rng);
    kinds.insert(cmd.kind);
    CHECK(command_within_bounds(s, cmd, cfg));
    if (cmd.kind == OpKind::T) {
      REQUIRE(cmd.value.size() == 3);
      CHECK(std::abs(cmd.value[0]) <= 307.2);
      CHECK(std::abs(cmd.value[1]) <= 307.2);
      CHECK(std::abs(cmd.value[2]) <= 30.0);
    }
    const SceneState next = apply_operation(s, cmd, assets);
    CHECK(validate_state(next, assets).empty());
    // Walk the scene so the bounds are exercised away from the start.
    if (i % 10 == 0) s = next;
  }
  CHECK(kinds == std::set<OpKind>{OpKind::T, OpKind::S});
}

TEST_CASE("scale draws respect the factor bound") {
  const AssetStore& assets = demo_assets();
  SamplerConfig cfg;
  Rng rng(2);
  SceneState s = sample_initial_scene(Domain::Real, assets, 256, 256, cfg, rng);
  for (auto& obj : s.objects) obj.scale = 4.0;
  for (int i = 0; i < 2000; ++i) {
    const OperationCommand cmd = sample_command(s, assets, cfg, rng);
    if (cmd.kind == OpKind::S) CHECK(cmd.value[0] <= 1.0);
  }
}

TEST_CASE("synthetic sequences cover every kind") {
  const AssetStore& assets = demo_assets();
  SamplerConfig cfg;
  cfg.seq_len = 40;
  std::set<OpKind> kinds;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Sequence seq = generate_sequence(Domain::Syn, assets, 96, 64, cfg, seed);
    for (const auto& rec : seq.records) {
      kinds.insert(rec.command.kind);
      CHECK(rec.command.value.size() == value_arity(Domain::Syn, rec.command.kind));
    }
    CHECK(seq.states.size() == seq.frames.size());
    CHECK(seq.records.size() + 1 == seq.states.size());
  }
  CHECK(kinds.size() == 5);
}

TEST_CASE("generation is deterministic per seed") {
  const AssetStore& assets = demo_assets();
  SamplerConfig cfg;
  cfg.seq_len = 6;
  const Sequence a = generate_sequence(Domain::Real, assets, 64, 64, cfg, 42);
  const Sequence b = generate_sequence(Domain::Real, assets, 64, 64, cfg, 42);
  const Sequence c = generate_sequence(Domain::Real, assets, 64, 64, cfg, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.id == "real_000042");
  CHECK(a.frames.size() == 7);

  cfg.seq_len = 0;
  const Sequence empty = generate_sequence(Domain::Real, assets, 64, 64, cfg, 1);
  CHECK(empty.frames.size() == 1);
  CHECK(empty.records.empty());
  CHECK_FALSE(empty.truncated);
}

TEST_CASE("records agree with the states they connect") {
  const AssetStore& assets = demo_assets();
  SamplerConfig cfg;
  cfg.seq_len = 8;
  const Sequence seq = generate_sequence(Domain::Real, assets, 64, 64, cfg, 7);
  for (std::size_t i = 0; i < seq.records.size(); ++i) {
    CHECK(seq.records[i].round_index == static_cast<int>(i));
    CHECK(apply_operation(seq.states[i], seq.records[i].command, assets) == seq.states[i + 1]);
    CHECK(make_record(seq.states[i], seq.states[i + 1], seq.records[i].command, assets) == seq.records[i]);
  }
}

TEST_CASE("training windows") {
  const AssetStore& assets = demo_assets();
  SamplerConfig cfg;
  cfg.seq_len = 16;
  const Sequence seq = generate_sequence(Domain::Real, assets, 48, 48, cfg, 3);
  REQUIRE(seq.frames.size() == 17);
  Rng rng(4);
  std::vector<int> counts(13, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const TrainingWindow w = sample_training_window(seq, rng, 1, 12);
    REQUIRE(w.r >= 1);
    REQUIRE(w.r <= 12);
    ++counts[static_cast<std::size_t>(w.r)];
    CHECK(w.history.frames.size() == static_cast<std::size_t>(w.r));
    CHECK(w.history.records.size() == static_cast<std::size_t>(w.r));
    CHECK(w.target == seq.frames[w.history.start + static_cast<std::size_t>(w.r)]);
    CHECK(w.history.frames.front() == seq.frames[w.history.start]);
    CHECK(w.history.records.back() == seq.records[w.history.start + static_cast<std::size_t>(w.r) - 1]);
  }
  double chi2 = 0.0;
  const double expected = draws / 12.0;
  for (int r = 1; r <= 12; ++r) chi2 += std::pow(counts[static_cast<std::size_t>(r)] - expected, 2) / expected;
  CHECK(chi2 < 31.26);  // 99.9th percentile, 11 degrees of freedom

  SamplerConfig short_cfg;
  short_cfg.seq_len = 5;
  const Sequence short_seq = generate_sequence(Domain::Real, assets, 48, 48, short_cfg, 3);
  CHECK(code_of([&] { sample_training_window(short_seq, rng, 1, 12); }) == ErrorCode::SequenceTooShort);
}

TEST_CASE("config round trip") {
  SamplerConfig cfg;
  cfg.seq_len = 9;
  cfg.angle_x = {-10, 20};
  cfg.seed = 77;
  CHECK(sampler_config_from_json(to_json(cfg)) == cfg);
  CHECK(config_hash(cfg) == config_hash(sampler_config_from_json(to_json(cfg))));
  CHECK(config_hash(cfg) != config_hash(SamplerConfig{}));
  CHECK(config_hash(cfg).size() == 16);
  CHECK(sampler_config_from_json(nlohmann::json::object()) == SamplerConfig{});

  nlohmann::json bad = to_json(cfg);
  bad["bogus"] = 1;
  CHECK(code_of([&] { sampler_config_from_json(bad); }) == ErrorCode::InvalidConfig);
  nlohmann::json inverted = to_json(cfg);
  inverted["depth_range"] = {200, 10};
  CHECK(code_of([&] { sampler_config_from_json(inverted); }) == ErrorCode::InvalidConfig);
}
