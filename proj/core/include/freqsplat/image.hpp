// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace freqsplat {

// Row-major, interleaved-channel floating-point image. Values are nominally in
// [0,1]; intermediates may leave that range.
class ImageBuffer {
 public:
  static constexpr int kMinAnalysisSize = 8;

  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const ImageBuffer& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Throws std::invalid_argument unless the image is at least 8x8 with 1 or 3
// channels and only finite samples.
void validate_for_analysis(const ImageBuffer& img);

// Normalized, 3-sigma-truncated 1D Gaussian taps (length 2*ceil(3*sigma)+1).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur with replicated borders. sigma == 0 returns a copy.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

struct ScaleSpaceConfig {
  int levels = 4;                   // L; the space holds L+1 images
  double base = 1.5;                // sigma_l = base^l
  double gamma = 3.0;               // energy weighting exponent
  double epsilon = 1e-8;
  double integration_factor = 3.0;  // rho_l = integration_factor * sigma_l
  double omega_constant = 1.0;      // omega_l = omega_constant / sigma_l

  void validate() const;
  double sigma(int level) const;
  double omega(int level) const;
};

struct ScaleSpace {
  ImageBuffer original;
  std::vector<ImageBuffer> levels;  // I_0..I_L, full resolution
  std::vector<double> sigmas;
};

ScaleSpace build_scale_space(const ImageBuffer& img, const ScaleSpaceConfig& cfg);

// Sum of absolute forward differences over all channels, both directions.
double total_variation(const ImageBuffer& img);

// Single-channel luminance (Rec. 601 weights) or a copy for gray input.
ImageBuffer to_gray(const ImageBuffer& img);

}  // namespace freqsplat
