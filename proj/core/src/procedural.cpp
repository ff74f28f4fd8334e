// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/procedural.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace freqsplat {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised-cosine disc window: 1 inside r0, 0 beyond r0 + soft.
double disc_window(double x, double y, double cx, double cy, double r0, double soft) {
  const double r = std::hypot(x - cx, y - cy);
  if (r <= r0) return 1.0;
  if (r >= r0 + soft) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - r0) / soft));
}

double grating(double x, double y, double freq, double angle) {
  return std::sin(kTwoPi * freq * (x * std::cos(angle) + y * std::sin(angle)));
}

}  // namespace

ImageBuffer make_procedural_target(int width, int height) {
  ImageBuffer img(width, height, 3);
  const double sx = width / 256.0;
  const double sy = height / 256.0;
  const double deg = std::numbers::pi / 180.0;
  for (int yi = 0; yi < height; ++yi) {
    for (int xi = 0; xi < width; ++xi) {
      // Pattern is authored on a 256x256 canvas.
      const double x = xi / sx;
      const double y = yi / sy;
      const double u = x / 256.0;
      const double v = y / 256.0;
      double r = 0.30 + 0.25 * u + 0.05 * std::sin(kTwoPi * v);
      double g = 0.35 + 0.20 * v;
      double b = 0.50 - 0.15 * u + 0.05 * std::cos(kTwoPi * u);

      // Fine oblique grating, period 6 px.
      const double w1 = disc_window(x, y, 64, 64, 36, 8);
      const double s1 = grating(x, y, 1.0 / 6.0, 30 * deg);
      r += w1 * 0.22 * s1;
      g += w1 * 0.18 * s1;
      b += w1 * 0.10 * s1;

      // Medium grating, period 14 px.
      const double w2 = disc_window(x, y, 192, 64, 38, 10);
      const double s2 = grating(x, y, 1.0 / 14.0, 100 * deg);
      r -= w2 * 0.15 * s2;
      g += w2 * 0.20 * s2;
      b += w2 * 0.20 * s2;

      // Plaid of two period-10 gratings.
      const double w3 = disc_window(x, y, 64, 192, 36, 10);
      const double s3 = 0.5 * (grating(x, y, 0.1, 0.0) + grating(x, y, 0.1, 90 * deg));
      r += w3 * 0.20 * s3;
      g -= w3 * 0.10 * s3;
      b += w3 * 0.20 * s3;

      // Hard-edged checkerboard, 8 px cells.
      if (x >= 160 && x < 224 && y >= 160 && y < 224) {
        const bool on = ((static_cast<int>(x) / 8) + (static_cast<int>(y) / 8)) % 2 == 0;
        const double c = on ? 0.18 : -0.18;
        r += c;
        g += c;
        b += c;
      }

      // Solid disc and a thin bar.
      if (std::hypot(x - 128, y - 128) < 14) {
        r = 0.9;
        g = 0.75;
        b = 0.2;
      }
      if (std::abs(y - 0.35 * x - 112) < 1.5 && x > 100 && x < 150) {
        r = 0.1;
        g = 0.1;
        b = 0.15;
      }

      img.at(xi, yi, 0) = std::clamp(r, 0.0, 1.0);
      img.at(xi, yi, 1) = std::clamp(g, 0.0, 1.0);
      img.at(xi, yi, 2) = std::clamp(b, 0.0, 1.0);
    }
  }
  return img;
}

ImageBuffer make_sinusoid(int width, int height, double frequency, double angle_rad, double amplitude) {
  ImageBuffer img(width, height, 1);
  const double ca = std::cos(angle_rad);
  const double sa = std::sin(angle_rad);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y) = 0.5 + amplitude * std::sin(kTwoPi * frequency * (x * ca + y * sa));
    }
  }
  return img;
}

}  // namespace freqsplat
