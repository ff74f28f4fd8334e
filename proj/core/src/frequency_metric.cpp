// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/frequency_metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "freqsplat/rng.hpp"

namespace freqsplat {

Tensor2 sample_footprint(const ProjectedGaussian& pg, const TensorField& field, int n_samples,
                         std::uint64_t rng_seed) {
  if (n_samples < 1) throw std::invalid_argument("sample_footprint: n_samples must be >= 1");

  const bool degenerate = std::all_of(pg.axes.begin(), pg.axes.end(), [](const Eigen::Vector2d& v) {
    return v.norm() < kDegenerateFootprintPx;
  });
  if (degenerate) return field.sample_bilinear(pg.mu2d.x(), pg.mu2d.y());

  Eigen::Matrix<double, 2, 3> m;
  for (int k = 0; k < 3; ++k) m.col(k) = pg.axes[static_cast<std::size_t>(k)];
  const Eigen::Matrix2d cov = m * m.transpose();

  // Symmetric square root maps the unit disk onto the 1-sigma ellipse; the
  // closed form sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A))
  // stays defined when cov is rank deficient.
  const double root_det = std::sqrt(std::max(cov.determinant(), 0.0));
  const double norm = std::sqrt(cov.trace() + 2.0 * root_det);
  const Eigen::Matrix2d root = (cov + root_det * Eigen::Matrix2d::Identity()) / norm;

  SplitMixRng rng(rng_seed);
  Tensor2 acc;
  for (int i = 0; i < n_samples; ++i) {
    const double r = std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const Eigen::Vector2d p = pg.mu2d + root * Eigen::Vector2d(r * std::cos(phi), r * std::sin(phi));
    acc += field.sample_bilinear(p.x(), p.y());
  }
  return (1.0 / n_samples) * acc;
}

AxisVector eta(const ProjectedGaussian& pg, const Tensor2& tensor, double eps) {
  const double wavelength = min_wavelength(principal_eigen(tensor).lambda1, eps);
  AxisVector out{};
  for (std::size_t k = 0; k < 3; ++k) out[k] = pg.axes[k].norm() / wavelength;
  return out;
}

AxisVector eta_proj(const ProjectedGaussian& pg, const Tensor2& tensor) {
  AxisVector out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double u = pg.axes[k].x();
    const double v = pg.axes[k].y();
    const double q = tensor.sxx * u * u + 2.0 * tensor.sxy * u * v + tensor.syy * v * v;
    out[k] = std::sqrt(std::max(q, 0.0));
  }
  return out;
}

}  // namespace freqsplat
