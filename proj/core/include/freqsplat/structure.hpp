// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "freqsplat/image.hpp"

namespace freqsplat {

// Symmetric 2x2 tensor [[sxx, sxy], [sxy, syy]].
struct Tensor2 {
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;

  double trace() const { return sxx + syy; }
  double det() const { return sxx * syy - sxy * sxy; }
  double frobenius() const;

  Tensor2& operator+=(const Tensor2& o) {
    sxx += o.sxx;
    sxy += o.sxy;
    syy += o.syy;
    return *this;
  }
  friend Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
  friend Tensor2 operator-(const Tensor2& a, const Tensor2& b) {
    return {a.sxx - b.sxx, a.sxy - b.sxy, a.syy - b.syy};
  }
  friend Tensor2 operator*(double s, const Tensor2& t) { return {s * t.sxx, s * t.sxy, s * t.syy}; }
  bool operator==(const Tensor2&) const = default;
};

// Per-pixel structure tensor planes.
class TensorField {
 public:
  TensorField() = default;
  TensorField(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return sxx.size(); }

  Tensor2 at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {sxx[i], sxy[i], syy[i]};
  }
  void set(int x, int y, const Tensor2& t) {
    const std::size_t i = index(x, y);
    sxx[i] = t.sxx;
    sxy[i] = t.sxy;
    syy[i] = t.syy;
  }

  // Bilinear interpolation with coordinates clamped to the pixel grid.
  // Pixel (x, y) has its center at integer coordinates.
  Tensor2 sample_bilinear(double x, double y) const;

  // Plane views as single-channel images.
  ImageBuffer plane(int component) const;

  bool is_psd(double tol = 1e-9) const;

  std::vector<double> sxx;
  std::vector<double> sxy;
  std::vector<double> syy;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
};

struct EnergyField {
  int width = 0;
  int height = 0;
  std::vector<double> e;

  double at(int x, int y) const {
    return e[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  double mean() const;
};

struct EigenReadout {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::array<double, 2> e1{1.0, 0.0};
  double coherence = 0.0;
};

// Central-difference gradients (one-sided at borders), channel-summed outer
// products, each plane integrated with gaussian_blur(., rho).
TensorField structure_tensor(const ImageBuffer& img, double rho);

// Per-pixel division by trace + eps.
TensorField normalize_tensor(const TensorField& t, double eps);

// Per-pixel Euclidean norm of the channel difference prev - cur.
EnergyField band_energy(const ImageBuffer& prev, const ImageBuffer& cur);

// Energy- and frequency-weighted aggregation of the normalized per-level
// tensors:  sum_l E_l^g w_l^2 S^_l / (sum_l E_l^g + eps). E_0 is measured
// against the unblurred original.
TensorField aggregate_tensors(const ScaleSpace& ss, const ScaleSpaceConfig& cfg);

// Convenience: build_scale_space + aggregate_tensors, with input validation.
TensorField analyze_structure(const ImageBuffer& img, const ScaleSpaceConfig& cfg);

// Closed-form eigen-decomposition of a symmetric 2x2 matrix. e1 is oriented
// with e1.x >= 0 (e1.y > 0 when e1.x == 0); negative lambda2 round-off is
// clamped to zero.
EigenReadout principal_eigen(double sxx, double sxy, double syy);
inline EigenReadout principal_eigen(const Tensor2& t) { return principal_eigen(t.sxx, t.sxy, t.syy); }

// Smallest resolvable wavelength in pixels: 1 / (sqrt(lambda1) + eps).
double min_wavelength(double lambda1, double eps);

// Per-pixel lambda1 of a tensor field as a single-channel image.
ImageBuffer lambda1_map(const TensorField& t);

}  // namespace freqsplat
