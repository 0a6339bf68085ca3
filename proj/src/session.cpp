// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/session.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "sceneedit/error.hpp"

namespace sceneedit {

Observation OracleGenerator::generate(const GenerationRequest& request) {
  if (!request.simulated || !request.assets) {
    fail(ErrorCode::GeneratorFailure, "oracle generator needs the simulated scene state");
  }
  return render(*request.simulated, *request.assets);
}

NetworkStubGenerator::NetworkStubGenerator() : NetworkStubGenerator(Options{}) {}

NetworkStubGenerator::NetworkStubGenerator(Options options) : options_(options) {
  if (options_.frame_size < options_.feature_size || options_.feature_size < 1 ||
      options_.frame_size % options_.feature_size != 0 ||
      !std::has_single_bit(static_cast<unsigned>(options_.frame_size / options_.feature_size))) {
    fail(ErrorCode::InvalidConfig, "frame_size must be feature_size times a power of two");
  }
  op_encoder_ = EncoderParams::init(options_.embed_dim, options_.fourier_bands, options_.seed);
  attention_ = AttentionParams::init(options_.model_dim, op_encoder_.token_dim(), 1, options_.seed + 1);
  // Nonzero gates so both attention paths contribute.
  attention_.gamma = 0.5;
  attention_.lambda = 0.5;
}

const FrameEncoderWeights& NetworkStubGenerator::encoder_for(int in_channels) {
  auto it = frame_encoders_.find(in_channels);
  if (it == frame_encoders_.end()) {
    const int stages = std::countr_zero(static_cast<unsigned>(options_.frame_size / options_.feature_size));
    it = frame_encoders_
             .emplace(in_channels, FrameEncoderWeights::init(in_channels, 8, options_.model_dim, stages,
                                                             options_.seed + 2 + static_cast<std::uint64_t>(in_channels)))
             .first;
  }
  return it->second;
}

Observation NetworkStubGenerator::generate(const GenerationRequest& request) {
  if (request.frames.empty() || request.records.empty()) {
    fail(ErrorCode::GeneratorFailure, "network stub needs at least one history pair");
  }
  const int fs = options_.frame_size;
  const int gs = options_.feature_size;
  std::vector<Observation> small;
  small.reserve(request.frames.size());
  for (const Observation& f : request.frames) small.push_back({resize_bilinear(f.image, fs, fs), {}});
  const Mask frame_mask = downsample_mask(request.target_mask, fs, fs);
  const Tensor3 stack = assemble_frame_input(small, frame_mask);
  const Tensor3 features = frame_encode(stack, encoder_for(stack.channels), gs, gs);

  const int d = options_.model_dim;
  FeatureBlock visual(1, gs * gs, d);
  for (int y = 0; y < gs; ++y) {
    for (int x = 0; x < gs; ++x) {
      for (int c = 0; c < d; ++c) {
        // Sinusoidal position code keeps the tokens distinct while the
        // freshly initialized encoder still outputs zeros.
        const double pos = std::sin((y * gs + x + 1) * (c + 1) * 0.1);
        visual.at(0, y * gs + x, c) = features.at(c, y, x) + pos;
      }
    }
  }

  const FeatureBlock tokens = assemble_operation_tokens(request.records, op_encoder_);
  const Matrix cond = tokens.frame(0);
  const FeatureBlock conditioned = operation_self_attention(visual, cond, attention_);

  const Mask current_mask = downsample_mask(request.target_mask, gs, gs);
  const Mask previous_mask = box_coverage_mask(request.records.back().source_bbox, gs, gs);
  const Matrix context =
      context_self_attention(conditioned.frame(0), visual.frame(0), current_mask, previous_mask, current_mask, attention_);

  trace_.history_pairs = static_cast<int>(request.records.size());
  trace_.operation_tokens = tokens.tokens;
  trace_.token_dim = tokens.channels;
  trace_.frame_channels = stack.channels;
  trace_.feature_height = features.height;
  trace_.feature_width = features.width;
  trace_.feature_channels = features.channels;
  trace_.finite = tokens.all_finite() && conditioned.all_finite() && context.all_finite();
  if (!trace_.finite) fail(ErrorCode::GeneratorFailure, "network stub produced non-finite features");

  OracleGenerator oracle;
  return oracle.generate(request);
}

Session Session::create(Observation initial, int max_history) {
  if (max_history < 1) fail(ErrorCode::InvalidN, "max history must be at least 1");
  if (initial.image.width() < 1 || initial.image.height() < 1) {
    fail(ErrorCode::ShapeMismatch, "initial observation is empty");
  }
  Session s;
  s.max_history_ = max_history;
  s.frames_.push_back(std::move(initial));
  return s;
}

Session Session::create(SceneState initial, const AssetStore& assets, int max_history) {
  if (max_history < 1) fail(ErrorCode::InvalidN, "max history must be at least 1");
  if (const auto problems = validate_state(initial, assets); !problems.empty()) {
    fail(ErrorCode::BoundViolation, "invalid initial scene: " + problems.front());
  }
  Session s = create(render(initial, assets), max_history);
  s.assets_ = &assets;
  s.states_.push_back(initial);
  s.state_ = std::move(initial);
  return s;
}

const Observation& Session::submit_operation(const OperationCommand& cmd, Generator& generator, std::uint64_t seed,
                                             std::optional<NormBox> target_bbox) {
  const Observation& latest = frames_.back();
  const int width = latest.image.width();
  const int height = latest.image.height();

  std::optional<SceneState> next;
  if (state_) {
    next = apply_operation(*state_, cmd, *assets_);
  } else {
    if (cmd.value.empty() || cmd.value.size() > 3) fail(ErrorCode::IllegalCommand, "operation value has wrong arity");
    if (!target_bbox) fail(ErrorCode::IllegalCommand, "a target bbox is required without a simulated scene");
  }

  const Annotation* source = latest.find(cmd.target_instance_id);
  if (!source) fail(ErrorCode::UnknownInstance, "latest frame has no object '" + cmd.target_instance_id + "'");
  OperationRecord record;
  record.command = cmd;
  record.source_bbox = normalize_box(source->full_bbox_px, width, height);
  record.source_centroid = record.source_bbox.center();
  record.target_bbox = target_bbox ? *target_bbox : derive_source_region(*next, cmd.target_instance_id, *assets_).bbox;
  record.round_index = round_;

  // Pairs (x_i, o_{i+1}) for i < r+1, newest N kept.
  std::vector<OperationRecord> records = records_;
  records.push_back(record);
  GenerationRequest request;
  request.round = round_ + 1;
  request.frames = truncate_history(frames_, max_history_);
  request.records = truncate_history(std::move(records), max_history_);
  request.target_mask = box_coverage_mask(record.target_bbox, height, width);
  request.seed = seed;
  request.simulated = next ? &*next : nullptr;
  request.assets = assets_;
  if (request.frames.size() > static_cast<std::size_t>(max_history_) ||
      request.frames.size() != request.records.size()) {
    fail(ErrorCode::GeneratorFailure, "history assembly broke the buffer contract");
  }

  Observation frame;
  try {
    frame = generator.generate(request);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::GeneratorFailure, std::string(generator.name()) + ": " + e.what());
  }
  if (frame.image.width() != width || frame.image.height() != height) {
    fail(ErrorCode::GeneratorFailure, "generator returned a frame of the wrong size");
  }

  last_history_size_ = request.records.size();
  records_.push_back(std::move(record));
  frames_.push_back(std::move(frame));
  if (next) {
    states_.push_back(*next);
    state_ = std::move(next);
  }
  ++round_;
  return frames_.back();
}

}  // namespace sceneedit
