// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sceneedit/geometry.hpp"
#include "sceneedit/scene.hpp"
#include "sceneedit/tensor.hpp"
#include "sceneedit/weights.hpp"

namespace sceneedit {

/// Additive logit for masked attention pairs.
inline constexpr double kMaskedLogit = -1e9;

/// Weights of one spatial attention layer.
///
/// Base self-attention uses w_q/w_k/w_v/w_o. The injected context layer uses
/// ctx_q/ctx_k/ctx_v and gain `lambda`; the operation layer reuses the base
/// projections over [visual, condition] tokens, gated by β·tanh(γ).
/// `cond_proj` maps 7·embed_dim operation tokens to the model dim.
struct AttentionParams {
  int dim = 0;
  int heads = 1;
  int cond_dim = 0;
  Matrix w_q, w_k, w_v, w_o;
  Matrix ctx_q, ctx_k, ctx_v;
  Matrix cond_proj;
  std::vector<double> cond_bias;
  double gamma = 0.0;
  double lambda = 0.0;
  double beta = 1.0;

  /// Random projections; γ and λ start at zero, β at one.
  static AttentionParams init(int dim, int cond_dim, int heads, std::uint64_t seed);

  /// Context-attention projection by LoRA target name ("ctx_q", "ctx_k",
  /// "ctx_v"); nullptr for anything else.
  Matrix* context_weight(const std::string& name);

  void store(WeightFile& file, const std::string& prefix = "attn") const;
  static AttentionParams load(const WeightFile& file, const std::string& prefix = "attn");

  friend bool operator==(const AttentionParams&, const AttentionParams&) = default;
};

/// softmax(QKᵀ/√d_head)·V per head, then the output projection.
Matrix self_attention(const Matrix& tokens, const AttentionParams& params);

/// v̂ = v̄ + β·tanh(γ)·TS(SelfAttn([v̄, cond])) for each frame of `visual`.
/// `cond` is C × cond_dim and is projected to the model dim first; the same
/// condition sequence is shared by every frame.
FeatureBlock operation_self_attention(const FeatureBlock& visual, const Matrix& cond,
                                      const AttentionParams& params, double beta);
FeatureBlock operation_self_attention(const FeatureBlock& visual, const Matrix& cond,
                                      const AttentionParams& params);

/// hw × hw additive mask: 0 where current[i] and previous[j] are both set,
/// kMaskedLogit elsewhere. Masks are flattened row-major.
Matrix build_cross_round_mask(const Mask& current, const Mask& previous);

/// v̄_r = v_r + λ·M_tgt ⊙ softmax(A + Q'_r K'_{r−1}ᵀ/√d)·V'_{r−1}. Rows whose
/// mask row is fully masked contribute zero. Masks are on the token grid.
Matrix context_self_attention(const Matrix& current, const Matrix& previous, const Mask& current_mask,
                              const Mask& previous_mask, const Mask& target_mask,
                              const AttentionParams& params);

namespace reference {
// Single-threaded twins of the kernels above.
Matrix self_attention(const Matrix& tokens, const AttentionParams& params);
FeatureBlock operation_self_attention(const FeatureBlock& visual, const Matrix& cond,
                                      const AttentionParams& params, double beta);
Matrix context_self_attention(const Matrix& current, const Matrix& previous, const Mask& current_mask,
                              const Mask& previous_mask, const Mask& target_mask,
                              const AttentionParams& params);
}  // namespace reference

/// Low-rank update W ← W + (α/r)·B·A for one projection.
struct LoraAdapter {
  std::string target;  // "ctx_q" | "ctx_k" | "ctx_v"
  int rank = 1;
  double alpha = 1.0;
  Matrix down;  // A: rank × in
  Matrix up;    // B: out × rank, zero at creation

  friend bool operator==(const LoraAdapter&, const LoraAdapter&) = default;
};

struct LoraAdapterSet {
  Domain domain = Domain::Real;
  std::vector<LoraAdapter> adapters;

  /// Fresh adapters on all three context projections, B = 0.
  static LoraAdapterSet create(Domain domain, const AttentionParams& params, int rank, double alpha,
                               std::uint64_t seed);
};

/// Effective parameters with adapters folded in; `adapters == nullptr`
/// returns a copy of `params`.
AttentionParams apply_lora(const AttentionParams& params, const LoraAdapterSet* adapters);

/// Per-domain adapter sets. Training-time lookups return the set for the
/// sample's domain; inference lookups always return nothing.
class DomainLoraBank {
 public:
  void insert(LoraAdapterSet set);
  const LoraAdapterSet* select(Domain domain, bool inference) const;

 private:
  std::map<Domain, LoraAdapterSet> sets_;
};

}  // namespace sceneedit
