// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "freqsplat/image.hpp"
#include "freqsplat/structure.hpp"

namespace freqsplat {

using Rgb = std::array<double, 3>;

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  int width = 640;
  int height = 420;
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Line chart with axes, tick labels and a legend. Series colors cycle through
// a fixed palette. Throws std::invalid_argument on mismatched x/y lengths.
ImageBuffer plot_lines(const std::vector<Series>& series, const PlotOptions& opts = {});

// 5x7 bitmap text, uppercase only (lowercase is folded). Unknown glyphs
// render as blanks. Returns the x coordinate after the last glyph.
int draw_text(ImageBuffer& img, int x, int y, std::string_view text, const Rgb& color, int scale = 1);
int text_width(std::string_view text, int scale = 1);

void draw_line(ImageBuffer& img, double x0, double y0, double x1, double y1, const Rgb& color);

// Per-pixel values mapped through a perceptual-ish colormap after min/max
// normalization of sqrt(value).
ImageBuffer heatmap(const ImageBuffer& values);

// Ellipses of the tensor field on a dimmed gray background, one every
// `stride` pixels. The minor axis follows e1 and narrows with coherence.
ImageBuffer ellipse_field(const ImageBuffer& background, const TensorField& field, int stride);

}  // namespace freqsplat
