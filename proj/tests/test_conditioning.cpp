// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "sceneedit/conditioning.hpp"
#include "sceneedit/error.hpp"
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

// Two-layer MLP with erf-GELU, written against the raw parameter arrays.
std::vector<double> mlp_oracle(const ConditionEncoder& e, const std::vector<double>& in) {
  std::vector<double> h(e.b1.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    double z = e.b1[i];
    for (std::size_t k = 0; k < in.size(); ++k) z += e.w1(static_cast<int>(i), static_cast<int>(k)) * in[k];
    h[i] = z * 0.5 * std::erfc(-z / std::sqrt(2.0));
  }
  std::vector<double> out(e.b2.size());
  for (std::size_t o = 0; o < out.size(); ++o) {
    double z = e.b2[o];
    for (std::size_t k = 0; k < h.size(); ++k) z += e.w2(static_cast<int>(o), static_cast<int>(k)) * h[k];
    out[o] = z;
  }
  return out;
}

std::vector<double> fourier_oracle(const std::vector<double>& v, int bands) {
  std::vector<double> out;
  for (double x : v) {
    double freq = M_PI;
    for (int j = 0; j < bands; ++j, freq *= 2) {
      out.push_back(std::sin(freq * x));
      out.push_back(std::cos(freq * x));
    }
  }
  return out;
}

OperationRecord sample_record(OpKind kind, std::vector<double> value) {
  OperationRecord r;
  r.command = {"obj0", kind, std::move(value)};
  r.source_centroid = {0.4, 0.5};
  r.source_bbox = {0.3, 0.4, 0.5, 0.6};
  r.target_bbox = {0.5, 0.4, 0.7, 0.6};
  return r;
}

}  // namespace

TEST_CASE("fourier embedding") {
  const double v[] = {0.25};
  const auto e = fourier_embed(v, 2);
  REQUIRE(e.size() == 4);
  CHECK(e[0] == doctest::Approx(std::sqrt(0.5)));  // sin(π/4)
  CHECK(e[1] == doctest::Approx(std::sqrt(0.5)));  // cos(π/4)
  CHECK(e[2] == doctest::Approx(1.0));             // sin(π/2)
  CHECK(e[3] == doctest::Approx(0.0).epsilon(1e-12));
  const double zero[] = {0.0, 0.0};
  const auto z = fourier_embed(zero, 3);
  CHECK(z.size() == 12);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == (i % 2 == 0 ? 0.0 : 1.0));

  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> vals{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const auto got = fourier_embed(vals, 8);
    const auto want = fourier_oracle(vals, 8);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
  }
}

TEST_CASE("condition encoder") {
  const EncoderParams params = EncoderParams::init(16, 4, 7);
  CHECK(params.token_dim() == 7 * 16);
  for (int s = 0; s < kConditionCount; ++s) {
    const auto& e = params.encoders[static_cast<std::size_t>(s)];
    CHECK(e.w1.rows() == 32);
    CHECK(e.w1.cols() == 2 * 4 * condition_input_dim(static_cast<ConditionSlot>(s)));
    CHECK(e.w2.rows() == 16);
  }

  SUBCASE("absent conditions ignore their values") {
    Rng rng(2);
    const double zeros[] = {0, 0, 0, 0};
    const auto base = encode_condition(ConditionSlot::BBox, zeros, false, params);
    for (int i = 0; i < 100; ++i) {
      const double c[] = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
      CHECK(encode_condition(ConditionSlot::BBox, c, false, params) == base);
    }
    const auto want = mlp_oracle(params.encoder(ConditionSlot::BBox), params.encoder(ConditionSlot::BBox).null_embedding);
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(relative_error(base[k], want[k]) < 1e-12);
  }
  SUBCASE("present conditions match the MLP oracle") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
      const std::vector<double> c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const auto got = encode_condition(ConditionSlot::Translate, c, true, params);
      const auto want = mlp_oracle(params.encoder(ConditionSlot::Translate), fourier_oracle(c, 4));
      for (std::size_t k = 0; k < got.size(); ++k) CHECK(relative_error(got[k], want[k]) < 1e-12);
    }
  }
  SUBCASE("dimension check") {
    const double one[] = {1.0};
    CHECK(code_of([&] { encode_condition(ConditionSlot::BBox, one, true, params); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("condition values") {
  const OperationRecord t = sample_record(OpKind::T, {10, 0, 19});
  const auto tv = condition_values(t, ConditionSlot::Translate);
  REQUIRE(tv.size() == 3);
  CHECK(tv[0] == doctest::Approx(0.2));
  CHECK(tv[1] == doctest::Approx(0.0));
  CHECK(tv[2] == doctest::Approx(0.1));
  CHECK(condition_values(sample_record(OpKind::T, {0.5, 0.5}), ConditionSlot::Translate)[2] == 0.0);
  CHECK(condition_values(sample_record(OpKind::X, {90}), ConditionSlot::RotX)[0] == 0.5);
  CHECK(condition_values(sample_record(OpKind::S, {1.5}), ConditionSlot::Scale)[0] == 1.5);
  CHECK(condition_values(t, ConditionSlot::BBox) == std::vector<double>{0.3, 0.4, 0.5, 0.6});
}

TEST_CASE("operation tokens") {
  const EncoderParams params = EncoderParams::init(8, 3, 11);
  std::vector<double> nulls[kConditionCount];
  for (int s = 0; s < kConditionCount; ++s) {
    const auto slot = static_cast<ConditionSlot>(s);
    nulls[s] = encode_condition(slot, std::vector<double>(static_cast<std::size_t>(condition_input_dim(slot)), 0.0),
                                false, params);
  }

  TokenLayout layout;
  const FeatureBlock empty = assemble_operation_tokens({}, params, &layout);
  CHECK(empty.tokens == 1);
  CHECK(empty.channels == 56);
  CHECK(layout.rounds == 1);
  for (int s = 0; s < kConditionCount; ++s) CHECK(layout.slice(empty, 0, static_cast<ConditionSlot>(s)) == nulls[s]);

  const std::vector<OperationRecord> records{sample_record(OpKind::T, {1, 2, 3}), sample_record(OpKind::S, {2}),
                                             sample_record(OpKind::Y, {-20})};
  const FeatureBlock block = assemble_operation_tokens(records, params, &layout);
  CHECK(block.frames == 1);
  CHECK(block.tokens == 4);
  CHECK(layout.rounds == 4);
  for (int t = 1; t <= 3; ++t) {
    const OperationRecord& rec = records[static_cast<std::size_t>(t - 1)];
    for (int s = 0; s < kConditionCount; ++s) {
      const auto slot = static_cast<ConditionSlot>(s);
      const bool present = slot == ConditionSlot::Centroid || slot == ConditionSlot::BBox || slot == operation_slot(rec.command.kind);
      const auto part = layout.slice(block, t, slot);
      if (present) {
        CHECK(part == encode_condition(slot, condition_values(rec, slot), true, params));
      } else {
        CHECK(part == nulls[s]);
      }
    }
  }
}

TEST_CASE("frame input stack") {
  Observation a{Raster(4, 3, 255), {}}, b{Raster(4, 3, 0), {}};
  b.image.pixel(1, 2)[0] = 51;
  Mask mask(3, 4);
  mask.at(0, 3) = 1;
  const std::vector<Observation> obs{a, b};
  const Tensor3 t = assemble_frame_input(obs, mask);
  CHECK(t.channels == 9);
  CHECK(t.at(0, 0, 0) == 1.0);
  CHECK(t.at(4, 2, 1) == doctest::Approx(0.2));
  CHECK(t.at(8, 0, 3) == 1.0);
  CHECK(t.at(8, 0, 0) == 0.0);

  const std::vector<Observation> one{a};
  const Tensor3 single = assemble_frame_input(one, Mask(3, 4));
  CHECK(single.channels == 5);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) CHECK(single.at(4, y, x) == 0.0);
  CHECK(code_of([&] { assemble_frame_input(one, Mask(2, 2)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("conv2d matches a padded brute force") {
  Rng rng(5);
  ConvLayer layer{3, 4, 3, random_matrix(4, 27, rng), {0.1, -0.2, 0.3, 0.0}};
  Tensor3 in(3, 7, 9);
  for (double& v : in.data) v = rng.uniform(-1, 1);
  for (int stride : {1, 2}) {
    const Tensor3 out = conv2d(in, layer, stride);
    CHECK(out.height == (stride == 1 ? 7 : 4));
    CHECK(out.width == (stride == 1 ? 9 : 5));
    // Explicit zero-padded copy.
    Tensor3 padded(3, 9, 11);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x) padded.at(c, y + 1, x + 1) = in.at(c, y, x);
    for (int o = 0; o < 4; ++o)
      for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
          double acc = layer.bias[static_cast<std::size_t>(o)];
          for (int c = 0; c < 3; ++c)
            for (int ky = 0; ky < 3; ++ky)
              for (int kx = 0; kx < 3; ++kx)
                acc += layer.weight(o, c * 9 + ky * 3 + kx) * padded.at(c, y * stride + ky, x * stride + kx);
          CHECK(out.at(o, y, x) == doctest::Approx(acc).epsilon(1e-12));
        }
  }
}

TEST_CASE("frame encoder") {
  FrameEncoderWeights w = FrameEncoderWeights::init(5, 8, 6, 2, 9);
  Tensor3 in(5, 64, 64);
  Rng rng(6);
  for (double& v : in.data) v = rng.uniform(0, 1);
  const Tensor3 fresh = frame_encode(in, w, 16, 16);
  CHECK(fresh.channels == 6);
  CHECK(fresh.height == 16);
  CHECK(fresh.width == 16);
  for (double v : fresh.data) CHECK(v == 0.0);
  CHECK(code_of([&] { frame_encode(in, w, 32, 32); }) == ErrorCode::ShapeMismatch);

  SUBCASE("local receptive field") {
    for (double& v : w.projection.weight.data()) v = rng.uniform(-1, 1);
    const Tensor3 base = frame_encode(in, w, 16, 16);
    Tensor3 poked = in;
    poked.at(2, 1, 1) += 1.0;
    const Tensor3 out = frame_encode(poked, w, 16, 16);
    bool near_changed = false;
    for (int c = 0; c < 6; ++c) {
      for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
          const bool differs = out.at(c, y, x) != base.at(c, y, x);
          if (y < 2 && x < 2) near_changed |= differs;
          // Each output cell sees at most ~20 input pixels in each direction.
          if (y >= 8 || x >= 8) CHECK_FALSE(differs);
        }
      }
    }
    CHECK(near_changed);
  }

  SUBCASE("weights round trip through the weight file") {
    WeightFile file;
    w.store(file);
    const WeightFile back = WeightFile::deserialize(file.serialize());
    const FrameEncoderWeights loaded = FrameEncoderWeights::load(back);
    CHECK(loaded.stages == 2);
    CHECK(loaded.blocks.size() == 3);
    // Stored as f32.
    CHECK(loaded.stem.weight(0, 0) == static_cast<double>(static_cast<float>(w.stem.weight(0, 0))));
  }
}

TEST_CASE("encoder params round trip") {
  const EncoderParams p = EncoderParams::init(8, 2, 3);
  WeightFile file;
  p.store(file);
  CHECK(file.contains("op_encoder.centroid.w1"));
  const EncoderParams q = EncoderParams::load(WeightFile::deserialize(file.serialize()));
  CHECK(q.embed_dim == 8);
  CHECK(q.fourier_bands == 2);
  for (int s = 0; s < kConditionCount; ++s) {
    const auto& a = p.encoders[static_cast<std::size_t>(s)].w1.data();
    const auto& b = q.encoders[static_cast<std::size_t>(s)].w1.data();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == static_cast<double>(static_cast<float>(a[i])));
  }
  WeightFile broken = WeightFile::deserialize(file.serialize());
  auto bytes = broken.serialize();
  bytes.resize(bytes.size() - 4);
  CHECK(code_of([&] { WeightFile::deserialize(bytes); }) == ErrorCode::SchemaViolation);
}
