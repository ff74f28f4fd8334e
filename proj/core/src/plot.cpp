// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/plot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace freqsplat {
namespace {

constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr int kAdvance = 6;

struct Glyph {
  char ch;
  std::array<std::uint8_t, kGlyphH> rows;  // bit 4 is the leftmost column
};

constexpr std::array<Glyph, 49> kFont = {{
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}}, {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}}, {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}}, {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}}, {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
    {'%', {0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03}}, {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}}, {'e', {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
}};

constexpr std::array<Rgb, 6> kPalette = {{
    {0.86, 0.24, 0.18},
    {0.16, 0.42, 0.80},
    {0.20, 0.62, 0.26},
    {0.90, 0.58, 0.10},
    {0.50, 0.30, 0.70},
    {0.10, 0.60, 0.65},
}};

const Glyph* find_glyph(char c) {
  // 'e' keeps exponents legible; other lowercase letters fold to uppercase.
  const char key = c == 'e' ? 'e' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const Glyph& g : kFont) {
    if (g.ch == key) return &g;
  }
  return nullptr;
}

void put(ImageBuffer& img, int x, int y, const Rgb& color, double alpha = 1.0) {
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return;
  for (int c = 0; c < img.channels(); ++c) {
    const double src = color[static_cast<std::size_t>(std::min(c, 2))];
    img.at(x, y, c) = (1.0 - alpha) * img.at(x, y, c) + alpha * src;
  }
}

std::string tick_label(double v) {
  char buf[32];
  const double a = std::abs(v);
  if (a != 0.0 && (a >= 1e5 || a < 1e-3)) {
    std::snprintf(buf, sizeof(buf), "%.1e", v);
  } else if (a >= 100.0 || std::abs(v - std::round(v)) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  }
  return buf;
}

// Step from {1, 2, 5} x 10^k giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

Rgb colormap(double t) {
  t = std::clamp(t, 0.0, 1.0);
  // Piecewise-linear dark blue -> teal -> yellow.
  static constexpr std::array<Rgb, 4> stops = {{
      {0.05, 0.03, 0.25}, {0.15, 0.40, 0.55}, {0.35, 0.75, 0.40}, {0.99, 0.90, 0.15}}};
  const double s = t * (stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(s), stops.size() - 2);
  const double f = s - static_cast<double>(i);
  Rgb out{};
  for (std::size_t c = 0; c < 3; ++c) out[c] = (1.0 - f) * stops[i][c] + f * stops[i + 1][c];
  return out;
}

}  // namespace

int text_width(std::string_view text, int scale) {
  return static_cast<int>(text.size()) * kAdvance * scale;
}

int draw_text(ImageBuffer& img, int x, int y, std::string_view text, const Rgb& color, int scale) {
  for (const char ch : text) {
    if (const Glyph* g = find_glyph(ch)) {
      for (int r = 0; r < kGlyphH; ++r) {
        for (int col = 0; col < kGlyphW; ++col) {
          if (((g->rows[static_cast<std::size_t>(r)] >> (kGlyphW - 1 - col)) & 1U) == 0U) continue;
          for (int sy = 0; sy < scale; ++sy) {
            for (int sx = 0; sx < scale; ++sx) put(img, x + col * scale + sx, y + r * scale + sy, color);
          }
        }
      }
    }
    x += kAdvance * scale;
  }
  return x;
}

void draw_line(ImageBuffer& img, double x0, double y0, double x1, double y1, const Rgb& color) {
  const double len = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    put(img, static_cast<int>(std::lround(x0 + t * (x1 - x0))), static_cast<int>(std::lround(y0 + t * (y1 - y0))),
        color);
  }
}

ImageBuffer plot_lines(const std::vector<Series>& series, const PlotOptions& opts) {
  ImageBuffer img(opts.width, opts.height, 3, 1.0);
  const Rgb black{0.0, 0.0, 0.0};
  const Rgb grid{0.88, 0.88, 0.88};

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series '" + s.label + "': x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const int left = 64;
  const int right = opts.width - 16;
  const int top = 28;
  const int bottom = opts.height - 40;
  const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  const auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  const double xstep = nice_step(xmax - xmin, 6);
  for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax + 1e-9 * xstep; v += xstep) {
    draw_line(img, px(v), top, px(v), bottom, grid);
    const std::string label = tick_label(v);
    draw_text(img, static_cast<int>(px(v)) - text_width(label) / 2, bottom + 6, label, black);
  }
  const double ystep = nice_step(ymax - ymin, 6);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9 * ystep; v += ystep) {
    draw_line(img, left, py(v), right, py(v), grid);
    const std::string label = tick_label(v);
    draw_text(img, left - 6 - text_width(label), static_cast<int>(py(v)) - 3, label, black);
  }
  draw_line(img, left, bottom, right, bottom, black);
  draw_line(img, left, top, left, bottom, black);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const Rgb& color = kPalette[k % kPalette.size()];
    for (std::size_t i = 1; i < s.x.size(); ++i) {
      draw_line(img, px(s.x[i - 1]), py(s.y[i - 1]), px(s.x[i]), py(s.y[i]), color);
    }
    if (s.x.size() == 1) draw_text(img, static_cast<int>(px(s.x[0])) - 2, static_cast<int>(py(s.y[0])) - 3, "+", color);
    // Legend entry.
    const int ly = top + 6 + static_cast<int>(k) * 12;
    const int lx = right - 12 - text_width(s.label) - 20;
    draw_line(img, lx, ly + 3, lx + 14, ly + 3, color);
    draw_text(img, lx + 20, ly, s.label, color);
  }

  draw_text(img, (opts.width - text_width(opts.title)) / 2, 8, opts.title, black);
  draw_text(img, (left + right - text_width(opts.x_label)) / 2, opts.height - 16, opts.x_label, black);
  draw_text(img, 4, top - 14, opts.y_label, black);
  return img;
}

ImageBuffer heatmap(const ImageBuffer& values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double v : values.data()) {
    const double s = std::sqrt(std::max(v, 0.0));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double range = hi > lo ? hi - lo : 1.0;
  ImageBuffer out(values.width(), values.height(), 3);
  for (int y = 0; y < values.height(); ++y) {
    for (int x = 0; x < values.width(); ++x) {
      const Rgb c = colormap((std::sqrt(std::max(values.at(x, y, 0), 0.0)) - lo) / range);
      for (int k = 0; k < 3; ++k) out.at(x, y, k) = c[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

ImageBuffer ellipse_field(const ImageBuffer& background, const TensorField& field, int stride) {
  if (stride < 1) throw std::invalid_argument("ellipse stride must be >= 1");
  if (background.width() != field.width() || background.height() != field.height()) {
    throw std::invalid_argument("ellipse_field: dimension mismatch");
  }
  const ImageBuffer gray = to_gray(background);
  ImageBuffer out(field.width(), field.height(), 3);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const double g = 0.25 + 0.5 * std::clamp(gray.at(x, y), 0.0, 1.0);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = g;
    }
  }
  const double radius = 0.45 * stride;
  const Rgb color{0.95, 0.25, 0.10};
  for (int cy = stride / 2; cy < field.height(); cy += stride) {
    for (int cx = stride / 2; cx < field.width(); cx += stride) {
      const EigenReadout r = principal_eigen(field.at(cx, cy));
      if (!(r.lambda1 > 0.0)) continue;
      // Gradient direction e1 is across the structure; draw the ellipse long
      // along the isophote (e2) and short along e1.
      const double major = radius;
      const double minor = radius * std::max(0.15, 1.0 - r.coherence);
      const double ux = r.e1[0];
      const double uy = r.e1[1];
      constexpr int kSegments = 24;
      double prev_x = 0.0;
      double prev_y = 0.0;
      for (int i = 0; i <= kSegments; ++i) {
        const double t = 2.0 * std::numbers::pi * i / kSegments;
        const double a = minor * std::cos(t);
        const double b = major * std::sin(t);
        const double ex = cx + a * ux - b * uy;
        const double ey = cy + a * uy + b * ux;
        if (i > 0) draw_line(out, prev_x, prev_y, ex, ey, color);
        prev_x = ex;
        prev_y = ey;
      }
    }
  }
  return out;
}

}  // namespace freqsplat
