// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sceneedit/scene.hpp"
#include "sceneedit/tensor.hpp"
#include "sceneedit/weights.hpp"

namespace sceneedit {

/// Per-round condition slots in channel order: source region first
/// (centroid, bbox), then operation type & value (T, S, X, Y, Z).
enum class ConditionSlot { Centroid = 0, BBox, Translate, Scale, RotX, RotY, RotZ };
inline constexpr int kConditionCount = 7;

/// Input width of each slot before the Fourier embedding.
int condition_input_dim(ConditionSlot slot);
std::string_view to_string(ConditionSlot slot);
ConditionSlot operation_slot(OpKind kind);

/// f(c) = MLP(m·Fourier(c) + (1 − m)·e_null) for one condition slot.
struct ConditionEncoder {
  int input_dim = 0;
  Matrix w1;  // hidden × fourier_dim
  std::vector<double> b1;
  Matrix w2;  // embed × hidden
  std::vector<double> b2;
  std::vector<double> null_embedding;  // fourier_dim

  friend bool operator==(const ConditionEncoder&, const ConditionEncoder&) = default;
};

struct EncoderParams {
  int fourier_bands = 8;
  int embed_dim = 768;
  std::array<ConditionEncoder, kConditionCount> encoders;

  /// Hidden width is 2·embed_dim; weights are fan-in uniform from `seed`.
  static EncoderParams init(int embed_dim, int fourier_bands, std::uint64_t seed);

  const ConditionEncoder& encoder(ConditionSlot slot) const {
    return encoders[static_cast<std::size_t>(slot)];
  }
  int token_dim() const { return kConditionCount * embed_dim; }

  void store(WeightFile& file, const std::string& prefix = "op_encoder") const;
  static EncoderParams load(const WeightFile& file, const std::string& prefix = "op_encoder");

  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

/// [sin(2^j·π·v), cos(2^j·π·v)] for each component v and band j, component-major.
std::vector<double> fourier_embed(std::span<const double> values, int bands);

double gelu(double x);

std::vector<double> encode_condition(ConditionSlot slot, std::span<const double> condition, bool present,
                                     const EncoderParams& params);

/// Raw condition values carried by a record for one slot. Translation uses
/// the normalized centroid displacement plus, in the realistic domain, the
/// depth offset over the depth range; rotations are degrees / 180.
std::vector<double> condition_values(const OperationRecord& record, ConditionSlot slot);

/// Slices assembled operation tokens back into per-round, per-slot parts.
struct TokenLayout {
  int embed_dim = 0;
  int rounds = 0;  // tokens, including the leading null round

  int channel_offset(ConditionSlot slot) const { return static_cast<int>(slot) * embed_dim; }
  std::vector<double> slice(const FeatureBlock& block, int token, ConditionSlot slot) const;
};

/// One token per round: token 0 is the all-null round for x_0, token i+1
/// encodes records[i]. Shape (1, r + 1, 7·embed_dim).
FeatureBlock assemble_operation_tokens(std::span<const OperationRecord> records, const EncoderParams& params,
                                       TokenLayout* layout = nullptr);

/// Channel stack [x_0 … x_{r−1}, M_tgt]: RGBA of each frame scaled to
/// [0, 1], then the mask as the last channel.
Tensor3 assemble_frame_input(std::span<const Observation> observations, const Mask& target_mask);

/// Residual conv stack: stem 3×3, then per stage a residual block and a
/// stride-2 3×3 downsample, a last residual block, and a 1×1 projection that
/// starts at zero.
struct ConvLayer {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 3;
  Matrix weight;  // out × (in·kernel·kernel), index (ci·k + ky)·k + kx
  std::vector<double> bias;
  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

struct ResidualBlock {
  ConvLayer conv1;
  ConvLayer conv2;
  friend bool operator==(const ResidualBlock&, const ResidualBlock&) = default;
};

struct FrameEncoderWeights {
  int in_channels = 0;
  int hidden = 0;
  int out_channels = 0;
  int stages = 0;
  ConvLayer stem;
  std::vector<ResidualBlock> blocks;  // stages + 1
  std::vector<ConvLayer> downsample;  // stages
  ConvLayer projection;               // 1×1, zero at init

  static FrameEncoderWeights init(int in_channels, int hidden, int out_channels, int stages,
                                  std::uint64_t seed);

  void store(WeightFile& file, const std::string& prefix = "frame_encoder") const;
  static FrameEncoderWeights load(const WeightFile& file, const std::string& prefix = "frame_encoder");
};

/// Requires input dims = declared dims · 2^stages.
Tensor3 frame_encode(const Tensor3& stack, const FrameEncoderWeights& weights, int out_height, int out_width);

/// Zero-padded 2-D convolution, output channels processed in parallel.
Tensor3 conv2d(const Tensor3& input, const ConvLayer& layer, int stride);

}  // namespace sceneedit
