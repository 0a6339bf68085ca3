// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cmath>
#include <span>
#include <vector>

#include "sceneedit/error.hpp"
#include "sceneedit/rng.hpp"
#include "sceneedit/weights.hpp"

namespace sceneedit {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int r, int c) { return data_[index(r, c)]; }
  double operator()(int r, int c) const { return data_[index(r, c)]; }

  std::span<double> row(int r) { return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)}; }
  std::span<const double> row(int r) const {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t index(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Kaiming-style uniform init: U(−1/√fan_in, 1/√fan_in).
Matrix random_matrix(int rows, int cols, Rng& rng);
Matrix random_matrix(int rows, int cols, Rng& rng, double bound);

/// out = x · Wᵀ (+ bias), where x is n×in and W is out×in.
Matrix linear(const Matrix& x, const Matrix& weight, std::span<const double> bias = {});

/// Weight-file conversions; loads check the stored shape.
NamedArray to_named_array(const Matrix& m);
NamedArray to_named_array(std::span<const double> v);
Matrix matrix_from(const WeightFile& file, const std::string& name, int rows, int cols);
std::vector<double> vector_from(const WeightFile& file, const std::string& name, std::size_t size);
double scalar_from(const WeightFile& file, const std::string& name);

/// Frames × tokens × channels feature array, contiguous.
struct FeatureBlock {
  int frames = 0;
  int tokens = 0;
  int channels = 0;
  std::vector<double> data;

  FeatureBlock() = default;
  FeatureBlock(int f, int t, int c)
      : frames(f), tokens(t), channels(c),
        data(static_cast<std::size_t>(f) * static_cast<std::size_t>(t) * static_cast<std::size_t>(c), 0.0) {}

  double& at(int f, int t, int c) { return data[offset(f, t, c)]; }
  double at(int f, int t, int c) const { return data[offset(f, t, c)]; }
  std::span<double> token(int f, int t) {
    return {data.data() + offset(f, t, 0), static_cast<std::size_t>(channels)};
  }
  std::span<const double> token(int f, int t) const {
    return {data.data() + offset(f, t, 0), static_cast<std::size_t>(channels)};
  }

  Matrix frame(int f) const;
  void set_frame(int f, const Matrix& m);
  bool all_finite() const;

  friend bool operator==(const FeatureBlock&, const FeatureBlock&) = default;

 private:
  std::size_t offset(int f, int t, int c) const {
    return (static_cast<std::size_t>(f) * static_cast<std::size_t>(tokens) + static_cast<std::size_t>(t)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(c);
  }
};

/// Channels × height × width spatial map.
struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0.0) {}

  double& at(int c, int y, int x) { return data[offset(c, y, x)]; }
  double at(int c, int y, int x) const { return data[offset(c, y, x)]; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t offset(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

}  // namespace sceneedit
