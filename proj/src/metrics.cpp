// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sceneedit/error.hpp"

namespace sceneedit {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void check_same_dims(const Raster& a, const Raster& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    fail(ErrorCode::ShapeMismatch, "images differ in size");
  }
}

std::vector<double> luma(const Raster& r) {
  std::vector<double> y(static_cast<std::size_t>(r.width()) * static_cast<std::size_t>(r.height()));
  for (int py = 0; py < r.height(); ++py) {
    for (int px = 0; px < r.width(); ++px) {
      const auto* p = r.pixel(px, py);
      y[static_cast<std::size_t>(py * r.width() + px)] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
  }
  return y;
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    g[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    total += g[static_cast<std::size_t>(i)];
  }
  for (double& v : g) v /= total;
  return g;
}

// Separable Gaussian filter over the valid region.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h, const std::array<double, kWindow>& g) {
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += g[static_cast<std::size_t>(k)] * src[static_cast<std::size_t>(y * w + x + k)];
      tmp[static_cast<std::size_t>(y * ow + x)] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * static_cast<std::size_t>(oh));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += g[static_cast<std::size_t>(k)] * tmp[static_cast<std::size_t>((y + k) * ow + x)];
      out[static_cast<std::size_t>(y * ow + x)] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Raster& a, const Raster& b) {
  check_same_dims(a, b);
  double sum = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const auto* pa = a.pixel(x, y);
      const auto* pb = b.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(pa[c]) - static_cast<double>(pb[c]);
        sum += d * d;
      }
      count += 3;
    }
  }
  if (count == 0) fail(ErrorCode::TooSmall, "empty image");
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum / static_cast<double>(count);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Raster& a, const Raster& b) {
  check_same_dims(a, b);
  const int w = a.width();
  const int h = a.height();
  if (w < kWindow || h < kWindow) {
    fail(ErrorCode::TooSmall, "SSIM needs at least " + std::to_string(kWindow) + " pixels per side");
  }
  const auto g = gaussian_taps();
  const std::vector<double> x = luma(a);
  const std::vector<double> y = luma(b);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h, g);
  const auto my = filter_valid(y, w, h, g);
  const auto sxx = filter_valid(xx, w, h, g);
  const auto syy = filter_valid(yy, w, h, g);
  const auto sxy = filter_valid(xy, w, h, g);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cxy = sxy[i] - mx[i] * my[i];
    total += ((2.0 * mx[i] * my[i] + kC1) * (2.0 * cxy + kC2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + kC1) * (vx + vy + kC2));
  }
  return total / static_cast<double>(mx.size());
}

PairScores adjacent_pair_scores(std::span<const Raster> frames) {
  PairScores s;
  int finite_pairs = 0;
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const double p = psnr(frames[i - 1], frames[i]);
    if (std::isfinite(p)) {
      psnr_sum += p;
      ++finite_pairs;
    }
    ssim_sum += ssim(frames[i - 1], frames[i]);
    ++s.pairs;
  }
  if (s.pairs > 0) {
    // Identical pairs are excluded from the PSNR mean; all-identical is ∞.
    s.psnr = finite_pairs > 0 ? psnr_sum / finite_pairs : std::numeric_limits<double>::infinity();
    s.ssim = ssim_sum / s.pairs;
  }
  return s;
}

}  // namespace sceneedit
