// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "freqsplat/image.hpp"
#include "freqsplat/structure.hpp"

namespace freqsplat {

struct Perturbation {
  enum class Kind { Contrast, Noise, Sharpen, JpegLike };

  Kind kind = Kind::Contrast;
  double parameter = 1.0;  // factor, std, amount or quality depending on kind

  static Perturbation contrast(double factor) { return {Kind::Contrast, factor}; }
  static Perturbation noise(double stddev) { return {Kind::Noise, stddev}; }
  static Perturbation sharpen(double amount) { return {Kind::Sharpen, amount}; }
  static Perturbation jpeg_like(double quality) { return {Kind::JpegLike, quality}; }

  void validate() const;
};

std::string_view to_string(Perturbation::Kind kind);
Perturbation::Kind parse_perturbation_kind(std::string_view text);

// contrast: img * factor (no clamping). noise: + N(0, std^2) per sample.
// sharpen: img + amount * (img - blur(img, 1)). jpeg_like: block DCT quantizer.
ImageBuffer perturb(const ImageBuffer& img, const Perturbation& p, std::uint64_t seed);

// Baseline JPEG quantization tables (ITU-T T.81 Annex K), natural order.
const std::array<int, 64>& jpeg_luma_table();
const std::array<int, 64>& jpeg_chroma_table();
// IJG quality scaling of a base table; entries clamped to [1, 255].
std::array<int, 64> scaled_quant_table(const std::array<int, 64>& base, int quality);

// 8x8 block DCT round trip with quantization. RGB input goes through JFIF
// YCbCr with the luma table on Y and the chroma table on Cb/Cr; no chroma
// subsampling and no entropy coding. Output stays in float.
ImageBuffer jpeg_like(const ImageBuffer& img, int quality);

// Mean over pixels with |a|_F > 1e-6 of |a - b|_F / (|a|_F + eps); 0 when no
// pixel qualifies.
double tensor_change(const TensorField& a, const TensorField& b);

struct RobustnessRow {
  std::string perturbation;
  double parameter = 0.0;
  double change = 0.0;
};

// Fixed battery: contrast 0.5, contrast 1.5, noise 1/255, sharpen 1.5,
// sharpen 3.0, jpeg_like 80.
std::vector<Perturbation> robustness_battery();
std::vector<RobustnessRow> robustness_suite(const ImageBuffer& img, const ScaleSpaceConfig& cfg,
                                            std::uint64_t seed);

void write_robustness_csv(std::ostream& out, const std::vector<RobustnessRow>& rows);

}  // namespace freqsplat
