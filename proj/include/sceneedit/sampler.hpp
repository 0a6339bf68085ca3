// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sceneedit/rng.hpp"
#include "sceneedit/scene.hpp"

namespace sceneedit {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SamplerConfig {
  int seq_len = 32;
  // Realistic domain. Center offsets are fractions of the shortest side l.
  Interval center_offset_frac{-0.6, 0.6};
  Interval depth_offset{-30.0, 30.0};
  Interval depth_range{10.0, 200.0};
  Interval scale_range{0.2, 4.0};
  // Synthetic domain.
  Interval scale_step{0.2, 4.0};
  Interval angle_x{-50.0, 50.0};
  Interval angle_y{-45.0, 45.0};
  Interval angle_z{-60.0, 60.0};
  double translate_radius_frac = 0.6;  // of the ground patch extent
  // Training windows.
  int r_min = 1;
  int r_max = 12;
  // Scene construction.
  std::pair<int, int> objects_real{1, 4};
  std::pair<int, int> objects_syn{2, 5};
  // Resampling caps.
  int value_attempts = 64;
  int pair_attempts = 8;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig for ill-ordered intervals or non-positive caps.
  void validate() const;
  TransitionLimits limits() const;

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

nlohmann::json to_json(const SamplerConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
SamplerConfig sampler_config_from_json(const nlohmann::json& j);
SamplerConfig load_sampler_config(const std::filesystem::path& path);

/// Stable 64-bit FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(const SamplerConfig& cfg);

/// True iff the command's values respect the per-step sampling bounds.
bool command_within_bounds(const SceneState& state, const OperationCommand& cmd,
                           const SamplerConfig& cfg, std::string* why = nullptr);

/// Draws one validated command: object and kind uniform, value uniform (log
/// uniform for scale) within bounds. Each (object, kind) pair gets
/// `value_attempts` draws; after `pair_attempts` pairs, SamplingExhausted.
OperationCommand sample_command(const SceneState& state, const AssetStore& assets,
                                const SamplerConfig& cfg, Rng& rng);

/// Random initial scene for either domain.
SceneState sample_initial_scene(Domain domain, const AssetStore& assets, int width, int height,
                                const SamplerConfig& cfg, Rng& rng);

struct Sequence {
  std::string id;
  std::uint64_t seed = 0;
  std::vector<SceneState> states;         // seq_len + 1 (fewer if truncated)
  std::vector<Observation> frames;        // same length as states
  std::vector<OperationRecord> records;   // states.size() - 1
  bool truncated = false;

  Domain domain() const { return states.front().domain; }
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

Sequence build_sequence(const SceneState& initial, const AssetStore& assets, const SamplerConfig& cfg,
                        Rng& rng);

/// Full generation for one seed: initial scene + sequence.
Sequence generate_sequence(Domain domain, const AssetStore& assets, int width, int height,
                           const SamplerConfig& cfg, std::uint64_t seed);

struct EditHistory {
  std::vector<Observation> frames;       // x_s .. x_{s+r-1}
  std::vector<OperationRecord> records;  // o_s .. o_{s+r-1}
  std::size_t start = 0;
};

struct TrainingWindow {
  EditHistory history;
  Observation target;
  int r = 0;
};

TrainingWindow sample_training_window(const Sequence& sequence, Rng& rng, int r_min, int r_max);

}  // namespace sceneedit
