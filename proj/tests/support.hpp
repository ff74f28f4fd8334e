// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used as test oracles. They favour
// obviousness over speed: dense 2D kernels, explicit loops, naive DFTs.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "freqsplat/gaussian2d.hpp"
#include "freqsplat/image.hpp"
#include "freqsplat/projection.hpp"
#include "freqsplat/structure.hpp"

namespace freqsplat::testing {

inline ImageBuffer random_image(int w, int h, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageBuffer img(w, h, channels);
  for (double& v : img.data()) v = u(rng);
  return img;
}

inline ImageBuffer checkerboard(int w, int h, int period) {
  ImageBuffer img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(x, y) = ((x / (period / 2) + y / (period / 2)) % 2) ? 1.0 : 0.0;
  }
  return img;
}

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Dense 2D convolution with the outer product of the truncated, normalized 1D
// taps (radius ceil(3 sigma)) and replicated borders.
inline ImageBuffer dense_blur(const ImageBuffer& img, double sigma) {
  if (sigma == 0.0) return img;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k1(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) sum += k1[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : k1) v /= sum;
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        double acc = 0.0;
        for (int j = -r; j <= r; ++j) {
          for (int i = -r; i <= r; ++i) {
            const double w = k1[static_cast<std::size_t>(i + r)] * k1[static_cast<std::size_t>(j + r)];
            acc += w * img.at(clamp_index(x + i, img.width()), clamp_index(y + j, img.height()), c);
          }
        }
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

// Structure tensor by explicit loops: central differences (one-sided at the
// border), channel-summed outer products, dense Gaussian window.
inline TensorField dense_structure_tensor(const ImageBuffer& img, double rho) {
  const int w = img.width();
  const int h = img.height();
  ImageBuffer prod(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double xx = 0.0, xy = 0.0, yy = 0.0;
      for (int c = 0; c < img.channels(); ++c) {
        const int xl = std::max(x - 1, 0), xr = std::min(x + 1, w - 1);
        const int yl = std::max(y - 1, 0), yr = std::min(y + 1, h - 1);
        const double gx = (img.at(xr, y, c) - img.at(xl, y, c)) / (xr - xl);
        const double gy = (img.at(x, yr, c) - img.at(x, yl, c)) / (yr - yl);
        xx += gx * gx;
        xy += gx * gy;
        yy += gy * gy;
      }
      prod.at(x, y, 0) = xx;
      prod.at(x, y, 1) = xy;
      prod.at(x, y, 2) = yy;
    }
  }
  const ImageBuffer smooth = dense_blur(prod, rho);
  TensorField t(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) t.set(x, y, {smooth.at(x, y, 0), smooth.at(x, y, 1), smooth.at(x, y, 2)});
  }
  return t;
}

// Magnitude peak of the naive 2D DFT of a single-channel image (DC excluded).
// Returns the spatial frequency in cycles per pixel and the orientation of
// the wave vector in radians, folded into [0, pi).
struct SpectralPeak {
  double frequency = 0.0;
  double angle = 0.0;
};

inline SpectralPeak dft_peak(const ImageBuffer& img) {
  const int w = img.width();
  const int h = img.height();
  double mean = 0.0;
  for (double v : img.data()) mean += v;
  mean /= static_cast<double>(img.size());
  auto twiddles = [](int n) {
    std::vector<std::complex<double>> t(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
    return t;
  };
  const auto tw = twiddles(w);
  const auto th = twiddles(h);
  // Rows first, then columns: the same sums as the direct 2D definition.
  std::vector<std::complex<double>> rows(static_cast<std::size_t>(w * h));
  for (int y = 0; y < h; ++y) {
    for (int u = 0; u < w; ++u) {
      std::complex<double> acc = 0.0;
      for (int x = 0; x < w; ++x) {
        acc += (img.at(x, y) - mean) * tw[static_cast<std::size_t>((u * x) % w)];
      }
      rows[static_cast<std::size_t>(y * w + u)] = acc;
    }
  }
  double best = -1.0;
  SpectralPeak peak;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      std::complex<double> acc = 0.0;
      for (int y = 0; y < h; ++y) {
        acc += rows[static_cast<std::size_t>(y * w + u)] * th[static_cast<std::size_t>((v * y) % h)];
      }
      const double mag = std::abs(acc);
      if (mag > best) {
        best = mag;
        const double fu = (u <= w / 2 ? u : u - w) / static_cast<double>(w);
        const double fv = (v <= h / 2 ? v : v - h) / static_cast<double>(h);
        peak.frequency = std::hypot(fu, fv);
        double a = std::atan2(fv, fu);
        if (a < 0.0) a += std::numbers::pi;
        if (a >= std::numbers::pi) a -= std::numbers::pi;
        peak.angle = a;
      }
    }
  }
  return peak;
}

// Angle between two undirected orientations, in degrees within [0, 90].
inline double orientation_error_deg(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  if (d > std::numbers::pi / 2) d = std::numbers::pi - d;
  return d * 180.0 / std::numbers::pi;
}

// Direct per-pixel evaluation of the additive splat model with a caller-given
// inclusion mask per Gaussian (empty mask = include every pixel).
inline double gaussian_weight(const Gaussian2D& g, double x, double y) {
  const Eigen::Vector2d s = g.scale();
  const double c = std::cos(g.theta), sn = std::sin(g.theta);
  const double dx = x - g.mu.x(), dy = y - g.mu.y();
  const double u = c * dx + sn * dy;   // along the first axis
  const double v = -sn * dx + c * dy;  // along the second axis
  return std::exp(-0.5 * (u * u / (s.x() * s.x()) + v * v / (s.y() * s.y())));
}

inline double mahalanobis_sq(const Gaussian2D& g, double x, double y) {
  const double w = gaussian_weight(g, x, y);
  return -2.0 * std::log(w);
}

using PixelMask = std::vector<std::vector<bool>>;  // per Gaussian, per pixel

inline PixelMask truncation_mask(std::span<const Gaussian2D> pop, int w, int h) {
  PixelMask mask(pop.size(), std::vector<bool>(static_cast<std::size_t>(w * h)));
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Eigen::Vector2d s = pop[i].scale();
    const double c = std::cos(pop[i].theta), sn = std::sin(pop[i].theta);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = x - pop[i].mu.x(), dy = y - pop[i].mu.y();
        const double u = c * dx + sn * dy, v = -sn * dx + c * dy;
        mask[i][static_cast<std::size_t>(y * w + x)] = u * u / (s.x() * s.x()) + v * v / (s.y() * s.y()) <= 9.0;
      }
    }
  }
  return mask;
}

inline ImageBuffer brute_render(std::span<const Gaussian2D> pop, int w, int h, const PixelMask& mask) {
  ImageBuffer out(w, h, 3);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Gaussian2D& g = pop[i];
    const double alpha = g.opacity();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!mask[i][static_cast<std::size_t>(y * w + x)]) continue;
        const double wgt = gaussian_weight(g, x, y);
        for (int c = 0; c < 3; ++c) out.at(x, y, c) += alpha * g.color[c] * wgt;
      }
    }
  }
  return out;
}

inline double brute_loss(const ImageBuffer& render, const ImageBuffer& target, double w1, double w2) {
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < render.size(); ++i) {
    const double r = render.data()[i] - target.data()[i];
    l1 += std::abs(r);
    l2 += r * r;
  }
  const double n = static_cast<double>(render.size());
  return w1 * l1 / n + w2 * l2 / n;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("freqsplat_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::Quaterniond random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

}  // namespace freqsplat::testing
