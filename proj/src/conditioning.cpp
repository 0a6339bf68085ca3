// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/conditioning.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sceneedit/error.hpp"

namespace sceneedit {

namespace {

constexpr double kDepthSpan = 190.0;  // d_max − d_min of the realistic domain

}  // namespace

int condition_input_dim(ConditionSlot slot) {
  switch (slot) {
    case ConditionSlot::Centroid: return 2;
    case ConditionSlot::BBox: return 4;
    case ConditionSlot::Translate: return 3;
    default: return 1;
  }
}

std::string_view to_string(ConditionSlot slot) {
  static constexpr std::string_view names[] = {"centroid", "bbox", "translate", "scale", "rot_x", "rot_y", "rot_z"};
  return names[static_cast<int>(slot)];
}

ConditionSlot operation_slot(OpKind kind) {
  switch (kind) {
    case OpKind::T: return ConditionSlot::Translate;
    case OpKind::S: return ConditionSlot::Scale;
    case OpKind::X: return ConditionSlot::RotX;
    case OpKind::Y: return ConditionSlot::RotY;
    case OpKind::Z: return ConditionSlot::RotZ;
  }
  return ConditionSlot::Translate;
}

std::vector<double> fourier_embed(std::span<const double> values, int bands) {
  std::vector<double> out;
  out.reserve(values.size() * 2 * static_cast<std::size_t>(bands));
  for (double v : values) {
    for (int j = 0; j < bands; ++j) {
      const double arg = std::ldexp(1.0, j) * std::numbers::pi * v;
      out.push_back(std::sin(arg));
      out.push_back(std::cos(arg));
    }
  }
  return out;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

EncoderParams EncoderParams::init(int embed_dim, int fourier_bands, std::uint64_t seed) {
  if (embed_dim < 1 || fourier_bands < 1) fail(ErrorCode::InvalidConfig, "embed_dim and fourier_bands must be positive");
  EncoderParams p;
  p.embed_dim = embed_dim;
  p.fourier_bands = fourier_bands;
  Rng rng(seed);
  for (int s = 0; s < kConditionCount; ++s) {
    ConditionEncoder& e = p.encoders[static_cast<std::size_t>(s)];
    e.input_dim = condition_input_dim(static_cast<ConditionSlot>(s));
    const int fourier_dim = 2 * fourier_bands * e.input_dim;
    const int hidden = 2 * embed_dim;
    e.w1 = random_matrix(hidden, fourier_dim, rng);
    e.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    e.w2 = random_matrix(embed_dim, hidden, rng);
    e.b2.assign(static_cast<std::size_t>(embed_dim), 0.0);
    e.null_embedding.resize(static_cast<std::size_t>(fourier_dim));
    for (double& v : e.null_embedding) v = rng.uniform(-1.0, 1.0);
  }
  return p;
}

void EncoderParams::store(WeightFile& file, const std::string& prefix) const {
  file.put(prefix + ".meta", to_named_array(std::vector<double>{double(embed_dim), double(fourier_bands)}));
  for (int s = 0; s < kConditionCount; ++s) {
    const ConditionEncoder& e = encoders[static_cast<std::size_t>(s)];
    const std::string base = prefix + "." + std::string(to_string(static_cast<ConditionSlot>(s)));
    file.put(base + ".w1", to_named_array(e.w1));
    file.put(base + ".b1", to_named_array(e.b1));
    file.put(base + ".w2", to_named_array(e.w2));
    file.put(base + ".b2", to_named_array(e.b2));
    file.put(base + ".null", to_named_array(e.null_embedding));
  }
}

EncoderParams EncoderParams::load(const WeightFile& file, const std::string& prefix) {
  const auto meta = vector_from(file, prefix + ".meta", 2);
  EncoderParams p;
  p.embed_dim = static_cast<int>(meta[0]);
  p.fourier_bands = static_cast<int>(meta[1]);
  if (p.embed_dim < 1 || p.fourier_bands < 1) fail(ErrorCode::SchemaViolation, "invalid encoder dimensions");
  const int hidden = 2 * p.embed_dim;
  for (int s = 0; s < kConditionCount; ++s) {
    ConditionEncoder& e = p.encoders[static_cast<std::size_t>(s)];
    e.input_dim = condition_input_dim(static_cast<ConditionSlot>(s));
    const int fourier_dim = 2 * p.fourier_bands * e.input_dim;
    const std::string base = prefix + "." + std::string(to_string(static_cast<ConditionSlot>(s)));
    e.w1 = matrix_from(file, base + ".w1", hidden, fourier_dim);
    e.b1 = vector_from(file, base + ".b1", static_cast<std::size_t>(hidden));
    e.w2 = matrix_from(file, base + ".w2", p.embed_dim, hidden);
    e.b2 = vector_from(file, base + ".b2", static_cast<std::size_t>(p.embed_dim));
    e.null_embedding = vector_from(file, base + ".null", static_cast<std::size_t>(fourier_dim));
  }
  return p;
}

std::vector<double> encode_condition(ConditionSlot slot, std::span<const double> condition, bool present,
                                     const EncoderParams& params) {
  const ConditionEncoder& e = params.encoder(slot);
  if (static_cast<int>(condition.size()) != e.input_dim) {
    fail(ErrorCode::DimensionMismatch, std::string(to_string(slot)) + " expects " + std::to_string(e.input_dim) +
                                           " values, got " + std::to_string(condition.size()));
  }
  // Blend before the MLP; m is binary, so the unused branch is skipped
  // rather than multiplied by zero.
  const std::vector<double> input = present ? fourier_embed(condition, params.fourier_bands) : e.null_embedding;
  const int hidden = e.w1.rows();
  std::vector<double> h(static_cast<std::size_t>(hidden));
  for (int i = 0; i < hidden; ++i) {
    double acc = e.b1[static_cast<std::size_t>(i)];
    const auto w = e.w1.row(i);
    for (std::size_t k = 0; k < input.size(); ++k) acc += w[k] * input[k];
    h[static_cast<std::size_t>(i)] = gelu(acc);
  }
  std::vector<double> out(static_cast<std::size_t>(params.embed_dim));
  for (int o = 0; o < params.embed_dim; ++o) {
    double acc = e.b2[static_cast<std::size_t>(o)];
    const auto w = e.w2.row(o);
    for (int k = 0; k < hidden; ++k) acc += w[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(o)] = acc;
  }
  return out;
}

std::vector<double> condition_values(const OperationRecord& record, ConditionSlot slot) {
  const auto& v = record.command.value;
  switch (slot) {
    case ConditionSlot::Centroid: return {record.source_centroid.u, record.source_centroid.v};
    case ConditionSlot::BBox:
      return {record.source_bbox.u0, record.source_bbox.v0, record.source_bbox.u1, record.source_bbox.v1};
    case ConditionSlot::Translate: {
      const NormPoint to = record.target_bbox.center();
      const double dd = v.size() == 3 ? v[2] / kDepthSpan : 0.0;
      return {to.u - record.source_centroid.u, to.v - record.source_centroid.v, dd};
    }
    case ConditionSlot::Scale: return {v.empty() ? 1.0 : v[0]};
    default: return {v.empty() ? 0.0 : v[0] / 180.0};
  }
}

std::vector<double> TokenLayout::slice(const FeatureBlock& block, int token, ConditionSlot slot) const {
  const auto t = block.token(0, token);
  const auto begin = t.begin() + channel_offset(slot);
  return {begin, begin + embed_dim};
}

FeatureBlock assemble_operation_tokens(std::span<const OperationRecord> records, const EncoderParams& params,
                                       TokenLayout* layout) {
  const int rounds = static_cast<int>(records.size()) + 1;
  FeatureBlock block(1, rounds, params.token_dim());
  std::array<std::vector<double>, kConditionCount> nulls;
  for (int s = 0; s < kConditionCount; ++s) {
    const auto slot = static_cast<ConditionSlot>(s);
    const std::vector<double> zeros(static_cast<std::size_t>(condition_input_dim(slot)), 0.0);
    nulls[static_cast<std::size_t>(s)] = encode_condition(slot, zeros, false, params);
  }
  for (int t = 0; t < rounds; ++t) {
    auto token = block.token(0, t);
    for (int s = 0; s < kConditionCount; ++s) {
      const auto slot = static_cast<ConditionSlot>(s);
      std::vector<double> part;
      if (t == 0) {
        part = nulls[static_cast<std::size_t>(s)];
      } else {
        const OperationRecord& rec = records[static_cast<std::size_t>(t - 1)];
        const bool present = slot == ConditionSlot::Centroid || slot == ConditionSlot::BBox ||
                             slot == operation_slot(rec.command.kind);
        part = present ? encode_condition(slot, condition_values(rec, slot), true, params)
                       : nulls[static_cast<std::size_t>(s)];
      }
      std::copy(part.begin(), part.end(), token.begin() + s * params.embed_dim);
    }
  }
  if (layout) *layout = TokenLayout{params.embed_dim, rounds};
  return block;
}

Tensor3 assemble_frame_input(std::span<const Observation> observations, const Mask& target_mask) {
  if (observations.empty()) fail(ErrorCode::ShapeMismatch, "frame input needs at least one observation");
  const int w = observations.front().image.width();
  const int h = observations.front().image.height();
  if (target_mask.width != w || target_mask.height != h) {
    fail(ErrorCode::ShapeMismatch, "target mask does not match the canvas");
  }
  const int frames = static_cast<int>(observations.size());
  Tensor3 stack(4 * frames + 1, h, w);
  for (int f = 0; f < frames; ++f) {
    const Raster& img = observations[static_cast<std::size_t>(f)].image;
    if (img.width() != w || img.height() != h) fail(ErrorCode::ShapeMismatch, "observations differ in size");
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto* px = img.pixel(x, y);
        for (int c = 0; c < 4; ++c) stack.at(4 * f + c, y, x) = px[c] / 255.0;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) stack.at(4 * frames, y, x) = target_mask.at(y, x);
  }
  return stack;
}

namespace {

ConvLayer make_conv(int in, int out, int kernel, Rng& rng, bool zero) {
  ConvLayer c;
  c.in_channels = in;
  c.out_channels = out;
  c.kernel = kernel;
  c.weight = zero ? Matrix(out, in * kernel * kernel) : random_matrix(out, in * kernel * kernel, rng);
  c.bias.assign(static_cast<std::size_t>(out), 0.0);
  return c;
}

void store_conv(WeightFile& file, const std::string& name, const ConvLayer& c) {
  file.put(name + ".weight", {{c.out_channels, c.in_channels, c.kernel, c.kernel}, c.weight.data()});
  file.put(name + ".bias", to_named_array(c.bias));
}

ConvLayer load_conv(const WeightFile& file, const std::string& name, int in, int out, int kernel) {
  const NamedArray& w = file.get(name + ".weight");
  if (w.shape != std::vector<std::int64_t>{out, in, kernel, kernel}) {
    fail(ErrorCode::ShapeMismatch, "'" + name + ".weight' has the wrong shape");
  }
  ConvLayer c;
  c.in_channels = in;
  c.out_channels = out;
  c.kernel = kernel;
  c.weight = Matrix(out, in * kernel * kernel);
  c.weight.data() = w.values;
  c.bias = vector_from(file, name + ".bias", static_cast<std::size_t>(out));
  return c;
}

void relu_inplace(Tensor3& t) {
  for (double& v : t.data) v = v > 0.0 ? v : 0.0;
}

Tensor3 residual(const Tensor3& x, const ResidualBlock& block) {
  Tensor3 h = conv2d(x, block.conv1, 1);
  relu_inplace(h);
  Tensor3 out = conv2d(h, block.conv2, 1);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += x.data[i];
  return out;
}

}  // namespace

FrameEncoderWeights FrameEncoderWeights::init(int in_channels, int hidden, int out_channels, int stages,
                                              std::uint64_t seed) {
  if (in_channels < 1 || hidden < 1 || out_channels < 1 || stages < 0) {
    fail(ErrorCode::InvalidConfig, "frame encoder dimensions must be positive");
  }
  Rng rng(seed);
  FrameEncoderWeights w;
  w.in_channels = in_channels;
  w.hidden = hidden;
  w.out_channels = out_channels;
  w.stages = stages;
  w.stem = make_conv(in_channels, hidden, 3, rng, false);
  for (int s = 0; s <= stages; ++s) {
    w.blocks.push_back({make_conv(hidden, hidden, 3, rng, false), make_conv(hidden, hidden, 3, rng, false)});
    if (s < stages) w.downsample.push_back(make_conv(hidden, hidden, 3, rng, false));
  }
  w.projection = make_conv(hidden, out_channels, 1, rng, true);
  return w;
}

void FrameEncoderWeights::store(WeightFile& file, const std::string& prefix) const {
  file.put(prefix + ".meta", to_named_array(std::vector<double>{double(in_channels), double(hidden),
                                                                double(out_channels), double(stages)}));
  store_conv(file, prefix + ".stem", stem);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    store_conv(file, prefix + ".block" + std::to_string(i) + ".conv1", blocks[i].conv1);
    store_conv(file, prefix + ".block" + std::to_string(i) + ".conv2", blocks[i].conv2);
  }
  for (std::size_t i = 0; i < downsample.size(); ++i) {
    store_conv(file, prefix + ".down" + std::to_string(i), downsample[i]);
  }
  store_conv(file, prefix + ".proj", projection);
}

FrameEncoderWeights FrameEncoderWeights::load(const WeightFile& file, const std::string& prefix) {
  const auto meta = vector_from(file, prefix + ".meta", 4);
  FrameEncoderWeights w;
  w.in_channels = static_cast<int>(meta[0]);
  w.hidden = static_cast<int>(meta[1]);
  w.out_channels = static_cast<int>(meta[2]);
  w.stages = static_cast<int>(meta[3]);
  if (w.in_channels < 1 || w.hidden < 1 || w.out_channels < 1 || w.stages < 0) {
    fail(ErrorCode::SchemaViolation, "invalid frame encoder dimensions");
  }
  w.stem = load_conv(file, prefix + ".stem", w.in_channels, w.hidden, 3);
  for (int s = 0; s <= w.stages; ++s) {
    const std::string b = prefix + ".block" + std::to_string(s);
    w.blocks.push_back({load_conv(file, b + ".conv1", w.hidden, w.hidden, 3),
                        load_conv(file, b + ".conv2", w.hidden, w.hidden, 3)});
    if (s < w.stages) w.downsample.push_back(load_conv(file, prefix + ".down" + std::to_string(s), w.hidden, w.hidden, 3));
  }
  w.projection = load_conv(file, prefix + ".proj", w.hidden, w.out_channels, 1);
  return w;
}

Tensor3 conv2d(const Tensor3& input, const ConvLayer& layer, int stride) {
  if (input.channels != layer.in_channels) {
    fail(ErrorCode::ShapeMismatch, "conv expects " + std::to_string(layer.in_channels) + " channels, got " +
                                       std::to_string(input.channels));
  }
  const int k = layer.kernel;
  const int pad = k / 2;
  const int oh = (input.height + 2 * pad - k) / stride + 1;
  const int ow = (input.width + 2 * pad - k) / stride + 1;
  Tensor3 out(layer.out_channels, oh, ow);
#pragma omp parallel for schedule(static)
  for (int o = 0; o < layer.out_channels; ++o) {
    const auto w = layer.weight.row(o);
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        double acc = layer.bias[static_cast<std::size_t>(o)];
        for (int c = 0; c < input.channels; ++c) {
          for (int ky = 0; ky < k; ++ky) {
            const int iy = y * stride + ky - pad;
            if (iy < 0 || iy >= input.height) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = x * stride + kx - pad;
              if (ix < 0 || ix >= input.width) continue;
              acc += w[static_cast<std::size_t>((c * k + ky) * k + kx)] * input.at(c, iy, ix);
            }
          }
        }
        out.at(o, y, x) = acc;
      }
    }
  }
  return out;
}

Tensor3 frame_encode(const Tensor3& stack, const FrameEncoderWeights& weights, int out_height, int out_width) {
  if (stack.channels != weights.in_channels) {
    fail(ErrorCode::ShapeMismatch, "frame encoder expects " + std::to_string(weights.in_channels) + " channels, got " +
                                       std::to_string(stack.channels));
  }
  if (out_height < 1 || out_width < 1 || stack.height != (out_height << weights.stages) ||
      stack.width != (out_width << weights.stages)) {
    fail(ErrorCode::ShapeMismatch, "input dims must equal the declared feature dims times 2^stages");
  }
  Tensor3 x = conv2d(stack, weights.stem, 1);
  relu_inplace(x);
  for (int s = 0; s < weights.stages; ++s) {
    x = residual(x, weights.blocks[static_cast<std::size_t>(s)]);
    x = conv2d(x, weights.downsample[static_cast<std::size_t>(s)], 2);
    relu_inplace(x);
  }
  x = residual(x, weights.blocks.back());
  return conv2d(x, weights.projection, 1);
}

}  // namespace sceneedit
