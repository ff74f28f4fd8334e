// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace freqsplat {

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels < 1) {
    throw std::invalid_argument("ImageBuffer: invalid dimensions");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

void validate_for_analysis(const ImageBuffer& img) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw std::invalid_argument("unsupported channel count: " + std::to_string(img.channels()));
  }
  if (img.width() < ImageBuffer::kMinAnalysisSize || img.height() < ImageBuffer::kMinAnalysisSize) {
    throw std::invalid_argument("image dimensions below the 8x8 minimum: " +
                                std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  for (double v : img.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("image contains non-finite samples");
  }
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw std::invalid_argument("gaussian_kernel: sigma must be finite and non-negative");
  }
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-static_cast<double>(i * i) * inv);
    taps[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

namespace {

// Taps are applied as g0*v[0] + sum_k g_k*(v[-k] + v[+k]) so the result does
// not depend on the traversal direction.
void blur_horizontal(const ImageBuffer& in, ImageBuffer& out, std::span<const double> taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = in.width();
  const int ch = in.channels();
  const auto stride = static_cast<std::size_t>(w) * static_cast<std::size_t>(ch);
  const double* src = in.data().data();
  double* dst = out.data().data();
  const auto at = [ch](int x, int c) {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c);
  };
#pragma omp parallel for schedule(static)
  for (int y = 0; y < in.height(); ++y) {
    const double* row = src + static_cast<std::size_t>(y) * stride;
    double* orow = dst + static_cast<std::size_t>(y) * stride;
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = taps[static_cast<std::size_t>(radius)] * row[at(x, c)];
        for (int k = 1; k <= radius; ++k) {
          const int lo = std::max(x - k, 0);
          const int hi = std::min(x + k, w - 1);
          acc += taps[static_cast<std::size_t>(radius + k)] * (row[at(lo, c)] + row[at(hi, c)]);
        }
        orow[at(x, c)] = acc;
      }
    }
  }
}

void blur_vertical(const ImageBuffer& in, ImageBuffer& out, std::span<const double> taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = in.height();
  const auto stride = static_cast<std::size_t>(in.width()) * static_cast<std::size_t>(in.channels());
  const double* src = in.data().data();
  double* dst = out.data().data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    double* orow = dst + static_cast<std::size_t>(y) * stride;
    const double* mid = src + static_cast<std::size_t>(y) * stride;
    const double t0 = taps[static_cast<std::size_t>(radius)];
    for (std::size_t i = 0; i < stride; ++i) orow[i] = t0 * mid[i];
    for (int k = 1; k <= radius; ++k) {
      const double* lo = src + static_cast<std::size_t>(std::max(y - k, 0)) * stride;
      const double* hi = src + static_cast<std::size_t>(std::min(y + k, h - 1)) * stride;
      const double t = taps[static_cast<std::size_t>(radius + k)];
      for (std::size_t i = 0; i < stride; ++i) orow[i] += t * (lo[i] + hi[i]);
    }
  }
}

}  // namespace

// Both pass orders are averaged so a quarter turn of the input commutes with
// the blur bit for bit.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  if (!std::isfinite(sigma)) throw std::invalid_argument("gaussian_blur: non-finite sigma");
  if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: negative sigma");
  if (sigma == 0.0 || img.empty()) return img;

  const std::vector<double> taps = gaussian_kernel(sigma);
  ImageBuffer tmp(img.width(), img.height(), img.channels());
  ImageBuffer hv(img.width(), img.height(), img.channels());
  ImageBuffer vh(img.width(), img.height(), img.channels());
  blur_horizontal(img, tmp, taps);
  blur_vertical(tmp, hv, taps);
  blur_vertical(img, tmp, taps);
  blur_horizontal(tmp, vh, taps);
  auto out = hv.data();
  const auto other = vh.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (out[i] + other[i]);
  return hv;
}

void ScaleSpaceConfig::validate() const {
  if (levels < 1) throw std::invalid_argument("scale_space.levels must be >= 1");
  if (!(base > 1.0)) throw std::invalid_argument("scale_space.base must be > 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("scale_space.gamma must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("scale_space.epsilon must be > 0");
  if (!(integration_factor > 0.0)) {
    throw std::invalid_argument("scale_space.integration_factor must be > 0");
  }
  if (!(omega_constant > 0.0)) throw std::invalid_argument("scale_space.omega_constant must be > 0");
}

double ScaleSpaceConfig::sigma(int level) const { return std::pow(base, level); }

double ScaleSpaceConfig::omega(int level) const { return omega_constant / sigma(level); }

ScaleSpace build_scale_space(const ImageBuffer& img, const ScaleSpaceConfig& cfg) {
  cfg.validate();
  ScaleSpace ss;
  ss.original = img;
  ss.levels.reserve(static_cast<std::size_t>(cfg.levels + 1));
  ss.sigmas.reserve(static_cast<std::size_t>(cfg.levels + 1));
  for (int l = 0; l <= cfg.levels; ++l) {
    const double s = cfg.sigma(l);
    ss.sigmas.push_back(s);
    ss.levels.push_back(gaussian_blur(img, s));
  }
  return ss;
}

double total_variation(const ImageBuffer& img) {
  double tv = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        if (x + 1 < img.width()) tv += std::abs(img.at(x + 1, y, c) - img.at(x, y, c));
        if (y + 1 < img.height()) tv += std::abs(img.at(x, y + 1, c) - img.at(x, y, c));
      }
    }
  }
  return tv;
}

ImageBuffer to_gray(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(x, y) = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
    }
  }
  return out;
}

}  // namespace freqsplat
