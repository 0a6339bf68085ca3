// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sceneedit/attention.hpp"
#include "sceneedit/conditioning.hpp"
#include "sceneedit/scene.hpp"

namespace sceneedit {

/// Keeps the newest `max_pairs` entries, order preserved.
template <typename T>
std::vector<T> truncate_history(std::vector<T> pairs, int max_pairs) {
  if (max_pairs >= 0 && pairs.size() > static_cast<std::size_t>(max_pairs)) {
    pairs.erase(pairs.begin(), pairs.end() - max_pairs);
  }
  return pairs;
}

/// Everything a generator sees for one round.
struct GenerationRequest {
  int round = 0;  // index of the frame being generated
  std::vector<Observation> frames;       // truncated history x_i
  std::vector<OperationRecord> records;  // truncated history o_i, last is current
  Mask target_mask;                      // canvas resolution
  std::uint64_t seed = 0;
  const SceneState* simulated = nullptr;  // post-operation state when known
  const AssetStore* assets = nullptr;
};

/// Any deterministic (history, target mask, seed) → observation map.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual Observation generate(const GenerationRequest& request) = 0;
  virtual std::string_view name() const = 0;
};

/// Renders the simulated post-operation state.
class OracleGenerator : public Generator {
 public:
  Observation generate(const GenerationRequest& request) override;
  std::string_view name() const override { return "oracle"; }
};

/// Shapes observed by the network stub on its last call.
struct StubTrace {
  int history_pairs = 0;
  int operation_tokens = 0;
  int token_dim = 0;
  int frame_channels = 0;
  int feature_height = 0;
  int feature_width = 0;
  int feature_channels = 0;
  bool finite = true;
};

/// Runs the conditioning and attention kernels on downsampled frames to
/// exercise the full data path, then returns the oracle render.
class NetworkStubGenerator : public Generator {
 public:
  struct Options {
    int embed_dim = 32;
    int fourier_bands = 8;
    int model_dim = 16;
    int frame_size = 32;    // frames resampled to frame_size²
    int feature_size = 8;   // encoder output grid
    std::uint64_t seed = 0;
  };

  NetworkStubGenerator();
  explicit NetworkStubGenerator(Options options);

  Observation generate(const GenerationRequest& request) override;
  std::string_view name() const override { return "network-stub"; }
  const StubTrace& last_trace() const { return trace_; }

 private:
  const FrameEncoderWeights& encoder_for(int in_channels);

  Options options_;
  EncoderParams op_encoder_;
  AttentionParams attention_;
  std::map<int, FrameEncoderWeights> frame_encoders_;
  StubTrace trace_;
};

/// Frame buffer B_f, operation buffer B_o, and the simulator state behind
/// them when the session was started from a scene.
class Session {
 public:
  /// Throws InvalidN for max_history < 1.
  static Session create(Observation initial, int max_history);
  static Session create(SceneState initial, const AssetStore& assets, int max_history);

  /// One round of the inference loop: records the operation, assembles and
  /// truncates the history, calls the generator, keeps only the new frame.
  const Observation& submit_operation(const OperationCommand& cmd, Generator& generator, std::uint64_t seed,
                                      std::optional<NormBox> target_bbox = std::nullopt);

  const std::vector<Observation>& frames() const { return frames_; }
  const std::vector<OperationRecord>& records() const { return records_; }
  int round() const { return round_; }
  int max_history() const { return max_history_; }
  const std::optional<SceneState>& state() const { return state_; }
  const std::vector<SceneState>& states() const { return states_; }
  std::size_t last_history_size() const { return last_history_size_; }

 private:
  Session() = default;

  std::vector<Observation> frames_;
  std::vector<OperationRecord> records_;
  int max_history_ = 1;
  int round_ = 0;
  std::optional<SceneState> state_;
  std::vector<SceneState> states_;  // simulated state per frame, if any
  const AssetStore* assets_ = nullptr;
  std::size_t last_history_size_ = 0;
};

}  // namespace sceneedit
