// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "freqsplat/text.hpp"

namespace freqsplat {
namespace {

constexpr double kChangeMask = 1e-6;
constexpr double kChangeEps = 1e-12;

// Orthonormal 8-point DCT-II basis, row k = frequency.
const std::array<double, 64>& dct_basis() {
  static const std::array<double, 64> basis = [] {
    std::array<double, 64> b{};
    for (int k = 0; k < 8; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) {
        b[static_cast<std::size_t>(k * 8 + n)] = scale * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
      }
    }
    return b;
  }();
  return basis;
}

// Quantizes one 8x8 block in place (values already level-shifted).
void quantize_block(std::array<double, 64>& block, const std::array<int, 64>& table) {
  const auto& c = dct_basis();
  std::array<double, 64> tmp{};
  std::array<double, 64> coef{};
  // coef = C * block * C^T
  for (int k = 0; k < 8; ++k) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += c[static_cast<std::size_t>(k * 8 + y)] * block[static_cast<std::size_t>(y * 8 + x)];
      tmp[static_cast<std::size_t>(k * 8 + x)] = s;
    }
  }
  for (int k = 0; k < 8; ++k) {
    for (int l = 0; l < 8; ++l) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += tmp[static_cast<std::size_t>(k * 8 + x)] * c[static_cast<std::size_t>(l * 8 + x)];
      const double q = table[static_cast<std::size_t>(k * 8 + l)];
      coef[static_cast<std::size_t>(k * 8 + l)] = std::round(s / q) * q;
    }
  }
  // block = C^T * coef * C
  for (int y = 0; y < 8; ++y) {
    for (int l = 0; l < 8; ++l) {
      double s = 0.0;
      for (int k = 0; k < 8; ++k) s += c[static_cast<std::size_t>(k * 8 + y)] * coef[static_cast<std::size_t>(k * 8 + l)];
      tmp[static_cast<std::size_t>(y * 8 + l)] = s;
    }
  }
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int l = 0; l < 8; ++l) s += tmp[static_cast<std::size_t>(y * 8 + l)] * c[static_cast<std::size_t>(l * 8 + x)];
      block[static_cast<std::size_t>(y * 8 + x)] = s;
    }
  }
}

// Quantizes one plane given in 0..255 units.
void quantize_plane(std::vector<double>& plane, int w, int h, const std::array<int, 64>& table) {
  const int bw = (w + 7) / 8;
  const int bh = (h + 7) / 8;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      std::array<double, 64> block{};
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          const int sx = std::min(bx * 8 + x, w - 1);
          const int sy = std::min(by * 8 + y, h - 1);
          block[static_cast<std::size_t>(y * 8 + x)] = plane[static_cast<std::size_t>(sy * w + sx)] - 128.0;
        }
      }
      quantize_block(block, table);
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          const int sx = bx * 8 + x;
          const int sy = by * 8 + y;
          if (sx < w && sy < h) plane[static_cast<std::size_t>(sy * w + sx)] = block[static_cast<std::size_t>(y * 8 + x)] + 128.0;
        }
      }
    }
  }
}

std::string format_param(double v) {
  return format_double(v);
}

}  // namespace

void Perturbation::validate() const {
  switch (kind) {
    case Kind::Contrast:
      if (!(parameter > 0.0)) throw std::invalid_argument("contrast factor must be > 0");
      break;
    case Kind::Noise:
      if (!(parameter >= 0.0)) throw std::invalid_argument("noise std must be >= 0");
      break;
    case Kind::Sharpen:
      if (!(parameter >= 0.0)) throw std::invalid_argument("sharpen amount must be >= 0");
      break;
    case Kind::JpegLike:
      if (!(parameter >= 1.0 && parameter <= 100.0)) throw std::invalid_argument("jpeg quality must lie in [1, 100]");
      break;
  }
}

std::string_view to_string(Perturbation::Kind kind) {
  switch (kind) {
    case Perturbation::Kind::Contrast:
      return "contrast";
    case Perturbation::Kind::Noise:
      return "noise";
    case Perturbation::Kind::Sharpen:
      return "sharpen";
    case Perturbation::Kind::JpegLike:
      return "jpeg_like";
  }
  return "unknown";
}

Perturbation::Kind parse_perturbation_kind(std::string_view text) {
  if (text == "contrast") return Perturbation::Kind::Contrast;
  if (text == "noise") return Perturbation::Kind::Noise;
  if (text == "sharpen") return Perturbation::Kind::Sharpen;
  if (text == "jpeg_like" || text == "jpeg") return Perturbation::Kind::JpegLike;
  throw std::invalid_argument("unknown perturbation kind: " + std::string(text));
}

const std::array<int, 64>& jpeg_luma_table() {
  static constexpr std::array<int, 64> table = {
      16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
      14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
      18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
      49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
  return table;
}

const std::array<int, 64>& jpeg_chroma_table() {
  static constexpr std::array<int, 64> table = {
      17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
      24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
      99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
      99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};
  return table;
}

std::array<int, 64> scaled_quant_table(const std::array<int, 64>& base, int quality) {
  quality = std::clamp(quality, 1, 100);
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> out{};
  for (std::size_t i = 0; i < 64; ++i) out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return out;
}

ImageBuffer jpeg_like(const ImageBuffer& img, int quality) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.pixel_count();
  const auto luma = scaled_quant_table(jpeg_luma_table(), quality);
  const auto chroma = scaled_quant_table(jpeg_chroma_table(), quality);
  ImageBuffer out(w, h, img.channels());

  if (img.channels() == 1) {
    std::vector<double> plane(n);
    for (std::size_t i = 0; i < n; ++i) plane[i] = img.data()[i] * 255.0;
    quantize_plane(plane, w, h, luma);
    for (std::size_t i = 0; i < n; ++i) out.data()[i] = plane[i] / 255.0;
    return out;
  }
  if (img.channels() != 3) throw std::invalid_argument("jpeg_like: expected 1 or 3 channels");

  std::vector<double> yp(n), cb(n), cr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.data()[3 * i] * 255.0;
    const double g = img.data()[3 * i + 1] * 255.0;
    const double b = img.data()[3 * i + 2] * 255.0;
    yp[i] = 0.299 * r + 0.587 * g + 0.114 * b;
    cb[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
    cr[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
  }
  quantize_plane(yp, w, h, luma);
  quantize_plane(cb, w, h, chroma);
  quantize_plane(cr, w, h, chroma);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = yp[i];
    const double u = cb[i] - 128.0;
    const double v = cr[i] - 128.0;
    out.data()[3 * i] = (y + 1.402 * v) / 255.0;
    out.data()[3 * i + 1] = (y - 0.344136 * u - 0.714136 * v) / 255.0;
    out.data()[3 * i + 2] = (y + 1.772 * u) / 255.0;
  }
  return out;
}

ImageBuffer perturb(const ImageBuffer& img, const Perturbation& p, std::uint64_t seed) {
  p.validate();
  switch (p.kind) {
    case Perturbation::Kind::Contrast: {
      ImageBuffer out = img;
      if (p.parameter != 1.0) {
        for (double& v : out.data()) v *= p.parameter;
      }
      return out;
    }
    case Perturbation::Kind::Noise: {
      ImageBuffer out = img;
      if (p.parameter == 0.0) return out;
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> dist(0.0, p.parameter);
      for (double& v : out.data()) v += dist(rng);
      return out;
    }
    case Perturbation::Kind::Sharpen: {
      ImageBuffer out = img;
      if (p.parameter == 0.0) return out;
      const ImageBuffer blurred = gaussian_blur(img, 1.0);
      auto o = out.data();
      const auto b = blurred.data();
      for (std::size_t i = 0; i < o.size(); ++i) o[i] += p.parameter * (o[i] - b[i]);
      return out;
    }
    case Perturbation::Kind::JpegLike:
      return jpeg_like(img, static_cast<int>(std::lround(p.parameter)));
  }
  return img;
}

double tensor_change(const TensorField& a, const TensorField& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("tensor_change: dimension mismatch");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const Tensor2 ta{a.sxx[i], a.sxy[i], a.syy[i]};
    const double norm = ta.frobenius();
    if (!(norm > kChangeMask)) continue;
    const Tensor2 tb{b.sxx[i], b.sxy[i], b.syy[i]};
    sum += (ta - tb).frobenius() / (norm + kChangeEps);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<Perturbation> robustness_battery() {
  return {Perturbation::contrast(0.5), Perturbation::contrast(1.5), Perturbation::noise(1.0 / 255.0),
          Perturbation::sharpen(1.5),  Perturbation::sharpen(3.0),  Perturbation::jpeg_like(80)};
}

std::vector<RobustnessRow> robustness_suite(const ImageBuffer& img, const ScaleSpaceConfig& cfg,
                                            std::uint64_t seed) {
  validate_for_analysis(img);
  const TensorField reference = analyze_structure(img, cfg);
  const std::vector<Perturbation> battery = robustness_battery();
  std::vector<RobustnessRow> rows(battery.size());
  const auto count = static_cast<std::ptrdiff_t>(battery.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Perturbation& p = battery[static_cast<std::size_t>(i)];
    const ImageBuffer perturbed = perturb(img, p, seed);
    RobustnessRow& row = rows[static_cast<std::size_t>(i)];
    row.perturbation = std::string(to_string(p.kind));
    row.parameter = p.parameter;
    row.change = tensor_change(reference, analyze_structure(perturbed, cfg));
  }
  return rows;
}

void write_robustness_csv(std::ostream& out, const std::vector<RobustnessRow>& rows) {
  out << "perturbation,parameter,change\n";
  for (const auto& r : rows) out << r.perturbation << ',' << format_param(r.parameter) << ',' << format_param(r.change) << '\n';
}

}  // namespace freqsplat
