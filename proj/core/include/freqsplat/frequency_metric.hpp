// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "freqsplat/projection.hpp"
#include "freqsplat/structure.hpp"

namespace freqsplat {

using AxisVector = std::array<double, 3>;

struct EtaSample {
  AxisVector eta{0.0, 0.0, 0.0};
  std::uint64_t view_id = 0;
  Tensor2 tensor;
};

// Footprints with every axis shorter than this (pixels) are read at mu2d.
inline constexpr double kDegenerateFootprintPx = 0.25;

// Mean of n_samples bilinear reads of `field` drawn uniformly inside the 1-sigma
// ellipse of the covariance M M^T, M = [v_x v_y v_z].
Tensor2 sample_footprint(const ProjectedGaussian& pg, const TensorField& field, int n_samples,
                         std::uint64_t rng_seed);

// eta_k = |v_k| / min_wavelength(lambda1(tensor), eps).
AxisVector eta(const ProjectedGaussian& pg, const Tensor2& tensor, double eps);

// eta_k = sqrt(v_k^T S v_k) with the raw (unnormalized) axis vector.
AxisVector eta_proj(const ProjectedGaussian& pg, const Tensor2& tensor);

}  // namespace freqsplat
