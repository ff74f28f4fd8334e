// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freqsplat {
namespace {

constexpr double kCoherenceEps = 1e-12;

// d/dx at (x, y, c): central difference, one-sided at the borders.
double grad_x(const ImageBuffer& img, int x, int y, int c) {
  const int w = img.width();
  if (w == 1) return 0.0;
  if (x == 0) return img.at(1, y, c) - img.at(0, y, c);
  if (x == w - 1) return img.at(w - 1, y, c) - img.at(w - 2, y, c);
  return 0.5 * (img.at(x + 1, y, c) - img.at(x - 1, y, c));
}

double grad_y(const ImageBuffer& img, int x, int y, int c) {
  const int h = img.height();
  if (h == 1) return 0.0;
  if (y == 0) return img.at(x, 1, c) - img.at(x, 0, c);
  if (y == h - 1) return img.at(x, h - 1, c) - img.at(x, h - 2, c);
  return 0.5 * (img.at(x, y + 1, c) - img.at(x, y - 1, c));
}

}  // namespace

double Tensor2::frobenius() const { return std::sqrt(sxx * sxx + 2.0 * sxy * sxy + syy * syy); }

TensorField::TensorField(int width, int height) : width_(width), height_(height) {
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  sxx.assign(n, 0.0);
  sxy.assign(n, 0.0);
  syy.assign(n, 0.0);
}

Tensor2 TensorField::sample_bilinear(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
  const int x0 = std::min(static_cast<int>(x), width_ - 1);
  const int y0 = std::min(static_cast<int>(y), height_ - 1);
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double w00 = (1 - fx) * (1 - fy);
  const double w10 = fx * (1 - fy);
  const double w01 = (1 - fx) * fy;
  const double w11 = fx * fy;
  const std::size_t i00 = index(x0, y0);
  const std::size_t i10 = index(x1, y0);
  const std::size_t i01 = index(x0, y1);
  const std::size_t i11 = index(x1, y1);
  auto lerp = [&](const std::vector<double>& p) {
    return w00 * p[i00] + w10 * p[i10] + w01 * p[i01] + w11 * p[i11];
  };
  return {lerp(sxx), lerp(sxy), lerp(syy)};
}

ImageBuffer TensorField::plane(int component) const {
  const std::vector<double>* src = component == 0 ? &sxx : component == 1 ? &sxy : &syy;
  ImageBuffer out(width_, height_, 1);
  std::copy(src->begin(), src->end(), out.data().begin());
  return out;
}

bool TensorField::is_psd(double tol) const {
  for (std::size_t i = 0; i < sxx.size(); ++i) {
    if (sxx[i] < -tol || syy[i] < -tol) return false;
    if (sxx[i] * syy[i] - sxy[i] * sxy[i] < -tol) return false;
  }
  return true;
}

double EnergyField::mean() const {
  if (e.empty()) return 0.0;
  double s = 0.0;
  for (double v : e) s += v;
  return s / static_cast<double>(e.size());
}

TensorField structure_tensor(const ImageBuffer& img, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("structure_tensor: rho must be positive and finite");
  }
  for (double v : img.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("structure_tensor: non-finite pixels");
  }
  const int w = img.width();
  const int h = img.height();
  // Outer products stored as a 3-channel image so one blur integrates all planes.
  ImageBuffer products(w, h, 3);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double xx = 0.0;
      double xy = 0.0;
      double yy = 0.0;
      for (int c = 0; c < img.channels(); ++c) {
        const double gx = grad_x(img, x, y, c);
        const double gy = grad_y(img, x, y, c);
        xx += gx * gx;
        xy += gx * gy;
        yy += gy * gy;
      }
      products.at(x, y, 0) = xx;
      products.at(x, y, 1) = xy;
      products.at(x, y, 2) = yy;
    }
  }
  const ImageBuffer integrated = gaussian_blur(products, rho);
  TensorField out(w, h);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    out.sxx[i] = integrated.data()[3 * i];
    out.sxy[i] = integrated.data()[3 * i + 1];
    out.syy[i] = integrated.data()[3 * i + 2];
  }
  return out;
}

TensorField normalize_tensor(const TensorField& t, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("normalize_tensor: eps must be > 0");
  TensorField out(t.width(), t.height());
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    const double inv = 1.0 / (t.sxx[i] + t.syy[i] + eps);
    out.sxx[i] = t.sxx[i] * inv;
    out.sxy[i] = t.sxy[i] * inv;
    out.syy[i] = t.syy[i] * inv;
  }
  return out;
}

EnergyField band_energy(const ImageBuffer& prev, const ImageBuffer& cur) {
  if (!prev.same_shape(cur)) throw std::invalid_argument("band_energy: dimension mismatch");
  EnergyField out{prev.width(), prev.height(), std::vector<double>(prev.pixel_count())};
  const int ch = prev.channels();
  const auto a = prev.data();
  const auto b = cur.data();
  for (std::size_t i = 0; i < out.e.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < ch; ++c) {
      const double d = a[i * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c)] -
                       b[i * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c)];
      s += d * d;
    }
    out.e[i] = std::sqrt(s);
  }
  return out;
}

TensorField aggregate_tensors(const ScaleSpace& ss, const ScaleSpaceConfig& cfg) {
  cfg.validate();
  if (ss.levels.size() != static_cast<std::size_t>(cfg.levels + 1)) {
    throw std::invalid_argument("aggregate_tensors: scale space does not match config");
  }
  const int w = ss.original.width();
  const int h = ss.original.height();
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);

  TensorField numer(w, h);
  std::vector<double> denom(n, 0.0);
  for (int l = 0; l <= cfg.levels; ++l) {
    const ImageBuffer& level = ss.levels[static_cast<std::size_t>(l)];
    const ImageBuffer& prev = l == 0 ? ss.original : ss.levels[static_cast<std::size_t>(l - 1)];
    const double sigma = ss.sigmas[static_cast<std::size_t>(l)];
    const double omega = cfg.omega_constant / sigma;
    const TensorField normalized =
        normalize_tensor(structure_tensor(level, cfg.integration_factor * sigma), cfg.epsilon);
    const EnergyField energy = band_energy(prev, level);
    for (std::size_t i = 0; i < n; ++i) {
      const double weight = std::pow(energy.e[i], cfg.gamma);
      const double scaled = weight * omega * omega;
      numer.sxx[i] += scaled * normalized.sxx[i];
      numer.sxy[i] += scaled * normalized.sxy[i];
      numer.syy[i] += scaled * normalized.syy[i];
      denom[i] += weight;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = 1.0 / (denom[i] + cfg.epsilon);
    numer.sxx[i] *= inv;
    numer.sxy[i] *= inv;
    numer.syy[i] *= inv;
  }
  return numer;
}

TensorField analyze_structure(const ImageBuffer& img, const ScaleSpaceConfig& cfg) {
  validate_for_analysis(img);
  return aggregate_tensors(build_scale_space(img, cfg), cfg);
}

EigenReadout principal_eigen(double sxx, double sxy, double syy) {
  const double mean = 0.5 * (sxx + syy);
  const double half_diff = 0.5 * (sxx - syy);
  const double radius = std::hypot(half_diff, sxy);
  EigenReadout r;
  r.lambda1 = mean + radius;
  r.lambda2 = std::max(0.0, mean - radius);
  if (r.lambda1 < 0.0) r.lambda1 = 0.0;

  // Pick the better-conditioned of the two eigenvector forms.
  const double ax = r.lambda1 - syy, bx = sxy;
  const double ay = sxy, by = r.lambda1 - sxx;
  double ex = 1.0, ey = 0.0;
  const double na = std::hypot(ax, bx), nb = std::hypot(ay, by);
  if (na > 0.0 || nb > 0.0) {
    ex = na >= nb ? ax / na : ay / nb;
    ey = na >= nb ? bx / na : by / nb;
  }
  if (ex < 0.0 || (ex == 0.0 && ey < 0.0)) {
    ex = -ex;
    ey = -ey;
  }
  r.e1 = {ex, ey};
  r.coherence = (r.lambda1 - r.lambda2) / (r.lambda1 + r.lambda2 + kCoherenceEps);
  r.coherence = std::clamp(r.coherence, 0.0, 1.0);
  return r;
}

double min_wavelength(double lambda1, double eps) {
  return 1.0 / (std::sqrt(std::max(lambda1, 0.0)) + eps);
}

ImageBuffer lambda1_map(const TensorField& t) {
  ImageBuffer out(t.width(), t.height(), 1);
  auto d = out.data();
  for (std::size_t i = 0; i < t.pixel_count(); ++i) {
    d[i] = principal_eigen(t.sxx[i], t.sxy[i], t.syy[i]).lambda1;
  }
  return out;
}

}  // namespace freqsplat
