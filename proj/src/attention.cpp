// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sceneedit/error.hpp"

namespace sceneedit {

AttentionParams AttentionParams::init(int dim, int cond_dim, int heads, std::uint64_t seed) {
  if (dim < 1 || cond_dim < 1 || heads < 1 || dim % heads != 0) {
    fail(ErrorCode::InvalidConfig, "attention needs positive dims with heads dividing dim");
  }
  Rng rng(seed);
  AttentionParams p;
  p.dim = dim;
  p.heads = heads;
  p.cond_dim = cond_dim;
  p.w_q = random_matrix(dim, dim, rng);
  p.w_k = random_matrix(dim, dim, rng);
  p.w_v = random_matrix(dim, dim, rng);
  p.w_o = random_matrix(dim, dim, rng);
  p.ctx_q = random_matrix(dim, dim, rng);
  p.ctx_k = random_matrix(dim, dim, rng);
  p.ctx_v = random_matrix(dim, dim, rng);
  p.cond_proj = random_matrix(dim, cond_dim, rng);
  p.cond_bias.assign(static_cast<std::size_t>(dim), 0.0);
  return p;
}

Matrix* AttentionParams::context_weight(const std::string& name) {
  if (name == "ctx_q") return &ctx_q;
  if (name == "ctx_k") return &ctx_k;
  if (name == "ctx_v") return &ctx_v;
  return nullptr;
}

void AttentionParams::store(WeightFile& file, const std::string& prefix) const {
  file.put(prefix + ".meta", to_named_array(std::vector<double>{double(dim), double(heads), double(cond_dim)}));
  file.put(prefix + ".w_q", to_named_array(w_q));
  file.put(prefix + ".w_k", to_named_array(w_k));
  file.put(prefix + ".w_v", to_named_array(w_v));
  file.put(prefix + ".w_o", to_named_array(w_o));
  file.put(prefix + ".ctx_q", to_named_array(ctx_q));
  file.put(prefix + ".ctx_k", to_named_array(ctx_k));
  file.put(prefix + ".ctx_v", to_named_array(ctx_v));
  file.put(prefix + ".cond_proj", to_named_array(cond_proj));
  file.put(prefix + ".cond_bias", to_named_array(cond_bias));
  file.put(prefix + ".gates", to_named_array(std::vector<double>{gamma, lambda, beta}));
}

AttentionParams AttentionParams::load(const WeightFile& file, const std::string& prefix) {
  const auto meta = vector_from(file, prefix + ".meta", 3);
  AttentionParams p;
  p.dim = static_cast<int>(meta[0]);
  p.heads = static_cast<int>(meta[1]);
  p.cond_dim = static_cast<int>(meta[2]);
  if (p.dim < 1 || p.heads < 1 || p.cond_dim < 1 || p.dim % p.heads != 0) {
    fail(ErrorCode::SchemaViolation, "invalid attention dimensions");
  }
  p.w_q = matrix_from(file, prefix + ".w_q", p.dim, p.dim);
  p.w_k = matrix_from(file, prefix + ".w_k", p.dim, p.dim);
  p.w_v = matrix_from(file, prefix + ".w_v", p.dim, p.dim);
  p.w_o = matrix_from(file, prefix + ".w_o", p.dim, p.dim);
  p.ctx_q = matrix_from(file, prefix + ".ctx_q", p.dim, p.dim);
  p.ctx_k = matrix_from(file, prefix + ".ctx_k", p.dim, p.dim);
  p.ctx_v = matrix_from(file, prefix + ".ctx_v", p.dim, p.dim);
  p.cond_proj = matrix_from(file, prefix + ".cond_proj", p.dim, p.cond_dim);
  p.cond_bias = vector_from(file, prefix + ".cond_bias", static_cast<std::size_t>(p.dim));
  const auto gates = vector_from(file, prefix + ".gates", 3);
  p.gamma = gates[0];
  p.lambda = gates[1];
  p.beta = gates[2];
  return p;
}

namespace {

Matrix serial_linear(const Matrix& x, const Matrix& w, std::span<const double> bias = {}) {
  if (x.cols() != w.cols()) fail(ErrorCode::ShapeMismatch, "projection input width mismatch");
  Matrix out(x.rows(), w.rows());
  for (int i = 0; i < x.rows(); ++i) {
    for (int o = 0; o < w.rows(); ++o) {
      double acc = bias.empty() ? 0.0 : bias[static_cast<std::size_t>(o)];
      for (int k = 0; k < x.cols(); ++k) acc += x(i, k) * w(o, k);
      out(i, o) = acc;
    }
  }
  return out;
}

Matrix project(const Matrix& x, const Matrix& w, bool parallel, std::span<const double> bias = {}) {
  return parallel ? linear(x, w, bias) : serial_linear(x, w, bias);
}

// Softmax-weighted sum for query row i over all key rows, restricted to the
// columns [col0, col0 + width). `mask_row` holds additive logits or is null.
void attend_row(const Matrix& q, const Matrix& k, const Matrix& v, int i, int col0, int width, double scale,
                const double* mask_row, std::vector<double>& logits, double* out) {
  const int n = k.rows();
  logits.resize(static_cast<std::size_t>(n));
  double max_logit = -INFINITY;
  for (int j = 0; j < n; ++j) {
    double dot = 0.0;
    for (int c = col0; c < col0 + width; ++c) dot += q(i, c) * k(j, c);
    double l = dot * scale;
    if (mask_row) l += mask_row[j];
    logits[static_cast<std::size_t>(j)] = l;
    max_logit = std::max(max_logit, l);
  }
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - max_logit);
    total += l;
  }
  for (int c = 0; c < width; ++c) out[c] = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p = logits[static_cast<std::size_t>(j)] / total;
    if (p == 0.0) continue;
    for (int c = 0; c < width; ++c) out[c] += p * v(j, col0 + c);
  }
}

void check_params(const AttentionParams& p, int dim) {
  if (dim != p.dim) {
    fail(ErrorCode::ShapeMismatch, "tokens have " + std::to_string(dim) + " channels, attention expects " +
                                       std::to_string(p.dim));
  }
  if (p.heads < 1 || p.dim % p.heads != 0) fail(ErrorCode::ShapeMismatch, "heads must divide the model dim");
}

Matrix self_attention_impl(const Matrix& tokens, const AttentionParams& p, bool parallel) {
  check_params(p, tokens.cols());
  const Matrix q = project(tokens, p.w_q, parallel);
  const Matrix k = project(tokens, p.w_k, parallel);
  const Matrix v = project(tokens, p.w_v, parallel);
  const int n = tokens.rows();
  const int dh = p.dim / p.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix heads(n, p.dim);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    std::vector<double> logits;
    for (int h = 0; h < p.heads; ++h) {
      attend_row(q, k, v, i, h * dh, dh, scale, nullptr, logits, heads.row(i).data() + h * dh);
    }
  }
  return project(heads, p.w_o, parallel);
}

Matrix project_condition(const Matrix& cond, const AttentionParams& p, bool parallel) {
  if (cond.cols() != p.cond_dim) {
    fail(ErrorCode::ShapeMismatch, "condition tokens have " + std::to_string(cond.cols()) + " channels, expected " +
                                       std::to_string(p.cond_dim));
  }
  return project(cond, p.cond_proj, parallel, p.cond_bias);
}

FeatureBlock operation_attention_impl(const FeatureBlock& visual, const Matrix& cond, const AttentionParams& p,
                                      double beta, bool parallel) {
  check_params(p, visual.channels);
  const Matrix projected = project_condition(cond, p, parallel);
  FeatureBlock out = visual;
  const double gate = beta * std::tanh(p.gamma);
  if (gate == 0.0) return out;
  const int t = visual.tokens;
  for (int f = 0; f < visual.frames; ++f) {
    Matrix joint(t + projected.rows(), p.dim);
    const Matrix frame = visual.frame(f);
    std::copy(frame.data().begin(), frame.data().end(), joint.data().begin());
    std::copy(projected.data().begin(), projected.data().end(),
              joint.data().begin() + static_cast<std::ptrdiff_t>(frame.data().size()));
    const Matrix attended = self_attention_impl(joint, p, parallel);
    for (int i = 0; i < t; ++i) {  // TS: keep the visual positions only
      for (int c = 0; c < p.dim; ++c) out.at(f, i, c) += gate * attended(i, c);
    }
  }
  return out;
}

Matrix context_attention_impl(const Matrix& current, const Matrix& previous, const Mask& current_mask,
                              const Mask& previous_mask, const Mask& target_mask, const AttentionParams& p,
                              bool parallel) {
  check_params(p, current.cols());
  check_params(p, previous.cols());
  const auto tokens = static_cast<std::size_t>(current.rows());
  if (previous.rows() != current.rows() || current_mask.size() != tokens || previous_mask.size() != tokens ||
      target_mask.size() != tokens) {
    fail(ErrorCode::ShapeMismatch, "token counts and mask grids must agree");
  }
  Matrix out = current;
  if (p.lambda == 0.0 || target_mask.count() == 0 || previous_mask.count() == 0) return out;
  const Matrix mask = build_cross_round_mask(current_mask, previous_mask);
  const Matrix q = project(current, p.ctx_q, parallel);
  const Matrix k = project(previous, p.ctx_k, parallel);
  const Matrix v = project(previous, p.ctx_v, parallel);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.dim));
  const int n = current.rows();
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    // Rows outside the current mask are fully masked and contribute zero.
    if (!target_mask.cells[idx] || !current_mask.cells[idx]) continue;
    std::vector<double> logits;
    std::vector<double> attended(static_cast<std::size_t>(p.dim));
    attend_row(q, k, v, i, 0, p.dim, scale, mask.row(i).data(), logits, attended.data());
    for (int c = 0; c < p.dim; ++c) out(i, c) += p.lambda * attended[static_cast<std::size_t>(c)];
  }
  return out;
}

}  // namespace

Matrix self_attention(const Matrix& tokens, const AttentionParams& params) {
  return self_attention_impl(tokens, params, true);
}

FeatureBlock operation_self_attention(const FeatureBlock& visual, const Matrix& cond, const AttentionParams& params,
                                      double beta) {
  return operation_attention_impl(visual, cond, params, beta, true);
}

FeatureBlock operation_self_attention(const FeatureBlock& visual, const Matrix& cond,
                                      const AttentionParams& params) {
  return operation_self_attention(visual, cond, params, params.beta);
}

Matrix build_cross_round_mask(const Mask& current, const Mask& previous) {
  if (current.height != previous.height || current.width != previous.width) {
    fail(ErrorCode::ShapeMismatch, "cross-round masks must share dimensions");
  }
  const int n = static_cast<int>(current.size());
  Matrix a(n, n, kMaskedLogit);
  for (int i = 0; i < n; ++i) {
    if (!current.cells[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j < n; ++j) {
      if (previous.cells[static_cast<std::size_t>(j)]) a(i, j) = 0.0;
    }
  }
  return a;
}

Matrix context_self_attention(const Matrix& current, const Matrix& previous, const Mask& current_mask,
                              const Mask& previous_mask, const Mask& target_mask, const AttentionParams& params) {
  return context_attention_impl(current, previous, current_mask, previous_mask, target_mask, params, true);
}

namespace reference {

Matrix self_attention(const Matrix& tokens, const AttentionParams& params) {
  return self_attention_impl(tokens, params, false);
}

FeatureBlock operation_self_attention(const FeatureBlock& visual, const Matrix& cond, const AttentionParams& params,
                                      double beta) {
  return operation_attention_impl(visual, cond, params, beta, false);
}

Matrix context_self_attention(const Matrix& current, const Matrix& previous, const Mask& current_mask,
                              const Mask& previous_mask, const Mask& target_mask, const AttentionParams& params) {
  return context_attention_impl(current, previous, current_mask, previous_mask, target_mask, params, false);
}

}  // namespace reference

LoraAdapterSet LoraAdapterSet::create(Domain domain, const AttentionParams& params, int rank, double alpha,
                                      std::uint64_t seed) {
  if (rank < 1) fail(ErrorCode::InvalidConfig, "LoRA rank must be at least 1");
  Rng rng(seed);
  LoraAdapterSet set;
  set.domain = domain;
  for (const char* target : {"ctx_q", "ctx_k", "ctx_v"}) {
    LoraAdapter a;
    a.target = target;
    a.rank = rank;
    a.alpha = alpha;
    a.down = random_matrix(rank, params.dim, rng);
    a.up = Matrix(params.dim, rank);
    set.adapters.push_back(std::move(a));
  }
  return set;
}

AttentionParams apply_lora(const AttentionParams& params, const LoraAdapterSet* adapters) {
  AttentionParams out = params;
  if (!adapters) return out;
  for (const LoraAdapter& a : adapters->adapters) {
    Matrix* w = out.context_weight(a.target);
    if (!w) fail(ErrorCode::UnknownTarget, "no LoRA target named '" + a.target + "'");
    if (a.rank < 1 || a.down.rows() != a.rank || a.up.cols() != a.rank || a.up.rows() != w->rows() ||
        a.down.cols() != w->cols()) {
      fail(ErrorCode::ShapeMismatch, "LoRA factors for '" + a.target + "' do not match the weight");
    }
    const double s = a.alpha / a.rank;
    for (int r = 0; r < w->rows(); ++r) {
      for (int c = 0; c < w->cols(); ++c) {
        double delta = 0.0;
        for (int k = 0; k < a.rank; ++k) delta += a.up(r, k) * a.down(k, c);
        if (delta != 0.0) (*w)(r, c) += s * delta;
      }
    }
  }
  return out;
}

void DomainLoraBank::insert(LoraAdapterSet set) { sets_[set.domain] = std::move(set); }

const LoraAdapterSet* DomainLoraBank::select(Domain domain, bool inference) const {
  if (inference) return nullptr;
  auto it = sets_.find(domain);
  return it == sets_.end() ? nullptr : &it->second;
}

}  // namespace sceneedit
