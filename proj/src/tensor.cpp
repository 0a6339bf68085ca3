// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/tensor.hpp"

#include <algorithm>
#include <string>

namespace sceneedit {

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
  return random_matrix(rows, cols, rng, 1.0 / std::sqrt(static_cast<double>(std::max(cols, 1))));
}

Matrix random_matrix(int rows, int cols, Rng& rng, double bound) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-bound, bound);
  return m;
}

Matrix linear(const Matrix& x, const Matrix& weight, std::span<const double> bias) {
  if (x.cols() != weight.cols()) {
    fail(ErrorCode::ShapeMismatch, "linear: input has " + std::to_string(x.cols()) + " features, weight expects " +
                                       std::to_string(weight.cols()));
  }
  if (!bias.empty() && static_cast<int>(bias.size()) != weight.rows()) {
    fail(ErrorCode::ShapeMismatch, "linear: bias length does not match output width");
  }
  Matrix out(x.rows(), weight.rows());
  const int n = x.rows();
  const int outs = weight.rows();
  const int ins = x.cols();
#pragma omp parallel for schedule(static) if (static_cast<long>(n) * outs * ins > 65536)
  for (int i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    for (int o = 0; o < outs; ++o) {
      const auto wo = weight.row(o);
      double acc = bias.empty() ? 0.0 : bias[static_cast<std::size_t>(o)];
      for (int k = 0; k < ins; ++k) acc += xi[static_cast<std::size_t>(k)] * wo[static_cast<std::size_t>(k)];
      out(i, o) = acc;
    }
  }
  return out;
}

Matrix FeatureBlock::frame(int f) const {
  Matrix m(tokens, channels);
  std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(offset(f, 0, 0)), m.data().size(), m.data().begin());
  return m;
}

void FeatureBlock::set_frame(int f, const Matrix& m) {
  if (m.rows() != tokens || m.cols() != channels) fail(ErrorCode::ShapeMismatch, "set_frame: shape mismatch");
  std::copy(m.data().begin(), m.data().end(), data.begin() + static_cast<std::ptrdiff_t>(offset(f, 0, 0)));
}

bool FeatureBlock::all_finite() const {
  return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace sceneedit

namespace sceneedit {

NamedArray to_named_array(const Matrix& m) { return {{m.rows(), m.cols()}, m.data()}; }

NamedArray to_named_array(std::span<const double> v) {
  return {{static_cast<std::int64_t>(v.size())}, std::vector<double>(v.begin(), v.end())};
}

Matrix matrix_from(const WeightFile& file, const std::string& name, int rows, int cols) {
  const NamedArray& a = file.get(name);
  if (a.shape != std::vector<std::int64_t>{rows, cols}) {
    fail(ErrorCode::ShapeMismatch, "'" + name + "' has the wrong shape");
  }
  Matrix m(rows, cols);
  m.data() = a.values;
  return m;
}

std::vector<double> vector_from(const WeightFile& file, const std::string& name, std::size_t size) {
  const NamedArray& a = file.get(name);
  if (a.shape != std::vector<std::int64_t>{static_cast<std::int64_t>(size)}) {
    fail(ErrorCode::ShapeMismatch, "'" + name + "' has the wrong shape");
  }
  return a.values;
}

double scalar_from(const WeightFile& file, const std::string& name) { return vector_from(file, name, 1)[0]; }

}  // namespace sceneedit
