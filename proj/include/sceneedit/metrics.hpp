// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "sceneedit/raster.hpp"

namespace sceneedit {

/// 10·log10(255²/MSE) over the RGB channels; +∞ for identical images.
double psnr(const Raster& a, const Raster& b);

/// Mean SSIM on Rec.601 luma with an 11×11 Gaussian window (σ = 1.5),
/// K1 = 0.01, K2 = 0.03, L = 255, valid windows only.
double ssim(const Raster& a, const Raster& b);

struct PairScores {
  double psnr = 0.0;
  double ssim = 0.0;
  int pairs = 0;
};

/// Averages scores over adjacent pairs (x_i, x_{i+1}) of a frame series.
/// Identical pairs are left out of the PSNR mean, which is +∞ only when
/// every pair is identical.
PairScores adjacent_pair_scores(std::span<const Raster> frames);

}  // namespace sceneedit
