// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include "freqsplat/gaussian2d.hpp"
#include "freqsplat/image.hpp"

namespace freqsplat {

// Mahalanobis cutoff: contributions beyond 3 sigma are dropped.
inline constexpr double kTruncationD2 = 9.0;

// Parameter order used by gradients and the optimizer.
enum Param : int {
  kMuX = 0,
  kMuY,
  kLogScaleX,
  kLogScaleY,
  kTheta,
  kColorR,
  kColorG,
  kColorB,
  kOpacityLogit,
  kParamCount
};
using ParamVector = std::array<double, kParamCount>;

ParamVector to_params(const Gaussian2D& g);
void from_params(Gaussian2D& g, const ParamVector& p);

// Additive splatting: C(p) = sum_i alpha_i c_i exp(-d_i(p)/2), pixel centers at
// integer coordinates, 3 channels. Output is not clamped.
ImageBuffer render2d(std::span<const Gaussian2D> pop, int width, int height);

struct RenderGradients {
  ImageBuffer render;
  double loss = 0.0;
  std::vector<ParamVector> grads;
  std::vector<double> position_grad_norm;  // |dL/dmu| per Gaussian
};

// L = w1 * mean|r| + w2 * mean r^2 with r = render - target over all samples.
// Analytic gradients for every parameter; the l1 subgradient at r == 0 is 0.
RenderGradients render_gradients(std::span<const Gaussian2D> pop, const ImageBuffer& target, double w1,
                                 double w2);

double loss_value(const ImageBuffer& render, const ImageBuffer& target, double w1, double w2);

// PSNR in dB of the [0,1]-clamped render against the target (peak 1).
double psnr(const ImageBuffer& render, const ImageBuffer& target);

// Replicates a single-channel image into 3 channels; 3-channel input is copied.
ImageBuffer to_rgb(const ImageBuffer& img);

}  // namespace freqsplat
