// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/render2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace freqsplat {
namespace {

constexpr int kBandRows = 16;
// Above this inverse variance the row recurrence can overflow; evaluate directly.
constexpr double kRecurrenceMaxA = 400.0;

// Per-Gaussian quantities shared by the forward and backward passes.
struct Splat {
  double mx = 0.0;
  double my = 0.0;
  double a = 0.0;  // inverse covariance [[a, b], [b, c]]
  double b = 0.0;
  double c = 0.0;
  double cos_t = 1.0;
  double sin_t = 0.0;
  double inv_s1_sq = 1.0;
  double inv_s2_sq = 1.0;
  double alpha = 0.0;
  double step = 0.0;  // exp(-a), the per-pixel ratio of successive q
  double inv_a = 0.0;
  std::array<double, 3> color{};
  std::array<double, 3> amp{};
  int x0 = 0;
  int x1 = -1;
  int y0 = 0;
  int y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
};

Splat make_splat(const Gaussian2D& g, int width, int height) {
  Splat s;
  s.mx = g.mu.x();
  s.my = g.mu.y();
  const Eigen::Vector2d scale = g.scale();
  s.cos_t = std::cos(g.theta);
  s.sin_t = std::sin(g.theta);
  s.inv_s1_sq = 1.0 / (scale.x() * scale.x());
  s.inv_s2_sq = 1.0 / (scale.y() * scale.y());
  const double cc = s.cos_t * s.cos_t;
  const double ss = s.sin_t * s.sin_t;
  const double cs = s.cos_t * s.sin_t;
  s.a = cc * s.inv_s1_sq + ss * s.inv_s2_sq;
  s.b = cs * (s.inv_s1_sq - s.inv_s2_sq);
  s.c = ss * s.inv_s1_sq + cc * s.inv_s2_sq;
  s.step = std::exp(-s.a);
  s.inv_a = 1.0 / s.a;
  s.alpha = g.opacity();
  for (int k = 0; k < 3; ++k) {
    s.color[static_cast<std::size_t>(k)] = g.color[k];
    s.amp[static_cast<std::size_t>(k)] = s.alpha * g.color[k];
  }

  const double var_x = cc * scale.x() * scale.x() + ss * scale.y() * scale.y();
  const double var_y = ss * scale.x() * scale.x() + cc * scale.y() * scale.y();
  const double rx = std::sqrt(kTruncationD2 * var_x);
  const double ry = std::sqrt(kTruncationD2 * var_y);
  if (!std::isfinite(s.mx) || !std::isfinite(s.my) || !std::isfinite(rx) || !std::isfinite(ry)) {
    return s;  // empty
  }
  const double fx0 = std::ceil(s.mx - rx);
  const double fx1 = std::floor(s.mx + rx);
  const double fy0 = std::ceil(s.my - ry);
  const double fy1 = std::floor(s.my + ry);
  if (fx1 < 0.0 || fy1 < 0.0 || fx0 > width - 1 || fy0 > height - 1) return s;
  s.x0 = static_cast<int>(std::max(fx0, 0.0));
  s.x1 = static_cast<int>(std::min(fx1, static_cast<double>(width - 1)));
  s.y0 = static_cast<int>(std::max(fy0, 0.0));
  s.y1 = static_cast<int>(std::min(fy1, static_cast<double>(height - 1)));
  return s;
}

// Pixels of one row inside the truncation ellipse, with the Gaussian weight
// at the first pixel and the ratio for the next step.
struct RowSpan {
  int x_begin = 0;
  int x_end = -1;  // inclusive
  double dx0 = 0.0;
  double g0 = 0.0;
  double q0 = 0.0;
  double step = 0.0;
  bool direct = false;  // evaluate exp per pixel instead of the recurrence
};

inline double row_d2(const Splat& s, double dx, double bdy, double cdy2) {
  return s.a * dx * dx + 2.0 * bdy * dx + cdy2;
}

// Along a row d2 is a convex quadratic in x, so the kept pixels form one run.
// Its ends come from the roots widened by a pixel and trimmed with the direct
// d2 test. Inside the run g(x+1) = g(x) q(x) and q(x+1) = q(x) exp(-a).
inline RowSpan row_span(const Splat& s, int y) {
  RowSpan span;
  const double dy = y - s.my;
  const double bdy = s.b * dy;
  const double cdy2 = s.c * dy * dy;
  const double disc = bdy * bdy - s.a * (cdy2 - kTruncationD2);
  if (disc < 0.0) return span;
  const double root = std::sqrt(disc);
  // Clamping first keeps the operands >= -1, where truncation by +2/-2 floors.
  const double lo = std::clamp(s.mx + (-bdy - root) * s.inv_a, s.x0 - 1.0, s.x1 + 1.0);
  const double hi = std::clamp(s.mx + (-bdy + root) * s.inv_a, s.x0 - 1.0, s.x1 + 1.0);
  int xs = std::max(s.x0, static_cast<int>(lo + 2.0) - 2);
  int xe = std::min(s.x1, static_cast<int>(hi + 2.0) - 1);
  while (xs <= xe && row_d2(s, xs - s.mx, bdy, cdy2) > kTruncationD2) ++xs;
  while (xe >= xs && row_d2(s, xe - s.mx, bdy, cdy2) > kTruncationD2) --xe;
  if (xe < xs) return span;
  span.x_begin = xs;
  span.x_end = xe;
  span.dx0 = xs - s.mx;
  span.g0 = std::exp(-0.5 * row_d2(s, span.dx0, bdy, cdy2));
  span.direct = s.a > kRecurrenceMaxA;
  if (!span.direct) {
    span.q0 = std::exp(-0.5 * (s.a * (2.0 * span.dx0 + 1.0) + 2.0 * bdy));
    span.step = s.step;
  }
  return span;
}

// Calls fn(x, dx, g) over the span, g = exp(-d2 / 2).
template <typename Fn>
inline void for_each_in_span(const Splat& s, int y, const RowSpan& span, Fn&& fn) {
  if (span.direct) {
    const double dy = y - s.my;
    for (int x = span.x_begin; x <= span.x_end; ++x) {
      const double dx = x - s.mx;
      fn(x, dx, std::exp(-0.5 * row_d2(s, dx, s.b * dy, s.c * dy * dy)));
    }
    return;
  }
  double g = span.g0;
  double q = span.q0;
  double dx = span.dx0;
  for (int x = span.x_begin; x <= span.x_end; ++x) {
    fn(x, dx, g);
    g *= q;
    q *= span.step;
    dx += 1.0;
  }
}

// Adds one Gaussian's contribution to an RGB row.
inline void accumulate_row(double* row, const Splat& s, int y, const RowSpan& span) {
  const double a0 = s.amp[0];
  const double a1 = s.amp[1];
  const double a2 = s.amp[2];
  double* px = row + static_cast<std::size_t>(span.x_begin) * 3;
  if (span.direct) {
    for_each_in_span(s, y, span, [&](int x, double, double g) {
      double* p = row + static_cast<std::size_t>(x) * 3;
      p[0] += a0 * g;
      p[1] += a1 * g;
      p[2] += a2 * g;
    });
    return;
  }
  double g = span.g0;
  double q = span.q0;
  const double step = span.step;
  for (int n = span.x_end - span.x_begin + 1; n > 0; --n, px += 3) {
    px[0] += a0 * g;
    px[1] += a1 * g;
    px[2] += a2 * g;
    g *= q;
    q *= step;
  }
}

// Splats plus the row spans of every splat, laid out contiguously: the spans
// of splat i occupy [offset[i], offset[i + 1]) for rows y0..y1.
struct SplatSet {
  std::vector<Splat> splats;
  std::vector<std::size_t> offset;
  std::vector<RowSpan> spans;

  const RowSpan& span(std::size_t i, int y) const {
    return spans[offset[i] + static_cast<std::size_t>(y - splats[i].y0)];
  }
};

SplatSet make_splats(std::span<const Gaussian2D> pop, int width, int height) {
  SplatSet set;
  set.splats.resize(pop.size());
  const auto n = static_cast<std::ptrdiff_t>(pop.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    set.splats[static_cast<std::size_t>(i)] = make_splat(pop[static_cast<std::size_t>(i)], width, height);
  }
  set.offset.assign(pop.size() + 1, 0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Splat& sp = set.splats[i];
    set.offset[i + 1] = set.offset[i] + (sp.empty() ? 0 : static_cast<std::size_t>(sp.y1 - sp.y0 + 1));
  }
  set.spans.resize(set.offset.back());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Splat& sp = set.splats[ui];
    if (sp.empty()) continue;
    for (int y = sp.y0; y <= sp.y1; ++y) set.spans[set.offset[ui] + static_cast<std::size_t>(y - sp.y0)] = row_span(sp, y);
  }
  return set;
}

ImageBuffer render_splats(const SplatSet& set, int width, int height) {
  const std::vector<Splat>& splats = set.splats;
  ImageBuffer out(width, height, 3);
  const int bands = (height + kBandRows - 1) / kBandRows;
  // Bands list their Gaussians in population order, so every pixel sums its
  // contributions in the same order regardless of thread count.
  std::vector<std::vector<std::uint32_t>> band_lists(static_cast<std::size_t>(bands));
  for (std::size_t i = 0; i < splats.size(); ++i) {
    const Splat& s = splats[i];
    if (s.empty()) continue;
    for (int band = s.y0 / kBandRows; band <= s.y1 / kBandRows; ++band) {
      band_lists[static_cast<std::size_t>(band)].push_back(static_cast<std::uint32_t>(i));
    }
  }
  double* data = out.data().data();
#pragma omp parallel for schedule(dynamic, 1)
  for (int band = 0; band < bands; ++band) {
    const int by0 = band * kBandRows;
    const int by1 = std::min(height - 1, by0 + kBandRows - 1);
    for (std::uint32_t idx : band_lists[static_cast<std::size_t>(band)]) {
      const Splat& s = splats[idx];
      for (int y = std::max(by0, s.y0); y <= std::min(by1, s.y1); ++y) {
        double* row = data + static_cast<std::size_t>(y) * static_cast<std::size_t>(width) * 3;
        accumulate_row(row, s, y, set.span(idx, y));
      }
    }
  }
  return out;
}

}  // namespace

ParamVector to_params(const Gaussian2D& g) {
  return {g.mu.x(),    g.mu.y(),    g.log_scale.x(), g.log_scale.y(), g.theta,
          g.color.x(), g.color.y(), g.color.z(),     g.opacity_logit};
}

void from_params(Gaussian2D& g, const ParamVector& p) {
  g.mu = {p[kMuX], p[kMuY]};
  g.log_scale = {p[kLogScaleX], p[kLogScaleY]};
  g.theta = p[kTheta];
  g.color = {p[kColorR], p[kColorG], p[kColorB]};
  g.opacity_logit = p[kOpacityLogit];
}

ImageBuffer render2d(std::span<const Gaussian2D> pop, int width, int height) {
  return render_splats(make_splats(pop, width, height), width, height);
}

ImageBuffer to_rgb(const ImageBuffer& img) {
  if (img.channels() == 3) return img;
  if (img.channels() != 1) throw std::invalid_argument("to_rgb: expected 1 or 3 channels");
  ImageBuffer out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y);
    }
  }
  return out;
}

double loss_value(const ImageBuffer& render, const ImageBuffer& target, double w1, double w2) {
  if (!render.same_shape(target)) throw std::invalid_argument("loss_value: shape mismatch");
  const auto r = render.data();
  const auto t = target.data();
  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = r[i] - t[i];
    l1 += std::abs(d);
    l2 += d * d;
  }
  const double inv = 1.0 / static_cast<double>(r.size());
  return w1 * l1 * inv + w2 * l2 * inv;
}

double psnr(const ImageBuffer& render, const ImageBuffer& target) {
  if (!render.same_shape(target)) throw std::invalid_argument("psnr: shape mismatch");
  const auto r = render.data();
  const auto t = target.data();
  double se = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = std::clamp(r[i], 0.0, 1.0) - t[i];
    se += d * d;
  }
  const double mse = se / static_cast<double>(r.size());
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

RenderGradients render_gradients(std::span<const Gaussian2D> pop, const ImageBuffer& target, double w1,
                                 double w2) {
  if (target.channels() != 3) throw std::invalid_argument("render_gradients: target must be RGB");
  const int width = target.width();
  const int height = target.height();
  const SplatSet set = make_splats(pop, width, height);
  const std::vector<Splat>& splats = set.splats;

  RenderGradients out;
  out.render = render_splats(set, width, height);

  // dL/dC per sample, plus per-row partial losses reduced in row order.
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  const double inv_n = 1.0 / static_cast<double>(out.render.size());
  ImageBuffer dl_dc(width, height, 3);
  std::vector<double> row_loss(static_cast<std::size_t>(height), 0.0);
  {
    const double* r = out.render.data().data();
    const double* t = target.data().data();
    double* g = dl_dc.data().data();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
      double acc = 0.0;
      const std::size_t base = static_cast<std::size_t>(y) * stride;
      for (std::size_t i = base; i < base + stride; ++i) {
        const double d = r[i] - t[i];
        acc += w1 * std::abs(d) + w2 * d * d;
        const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        g[i] = (w1 * sign + 2.0 * w2 * d) * inv_n;
      }
      row_loss[static_cast<std::size_t>(y)] = acc;
    }
  }
  for (double v : row_loss) out.loss += v;
  out.loss *= inv_n;

  out.grads.assign(pop.size(), ParamVector{});
  out.position_grad_norm.assign(pop.size(), 0.0);
  const double* gc = dl_dc.data().data();
  const auto n = static_cast<std::ptrdiff_t>(pop.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Splat& s = splats[static_cast<std::size_t>(i)];
    if (s.empty()) continue;
    // Per row, accumulate w = (dL/dC . alpha c) g and its first two moments in
    // dx; position, log-scale and angle gradients are linear in those moments.
    double d_mx = 0.0, d_my = 0.0, s_uu = 0.0, s_vv = 0.0, s_uv = 0.0;
    double d_cr = 0.0, d_cg = 0.0, d_cb = 0.0;
    const double cc = s.cos_t * s.cos_t;
    const double ss = s.sin_t * s.sin_t;
    const double cs = s.cos_t * s.sin_t;
    for (int y = s.y0; y <= s.y1; ++y) {
      const RowSpan& span = set.span(static_cast<std::size_t>(i), y);
      if (span.x_end < span.x_begin) continue;
      const double dy = y - s.my;
      const double* row = gc + static_cast<std::size_t>(y) * stride;
      double m0 = 0.0, m1 = 0.0, m2 = 0.0;
      double r0 = 0.0, r1 = 0.0, r2 = 0.0;
      for_each_in_span(s, y, span, [&, a0 = s.amp[0], a1 = s.amp[1], a2 = s.amp[2]](int x, double dx, double g) {
        const double* px = row + static_cast<std::size_t>(x) * 3;
        const double p0 = px[0];
        const double p1 = px[1];
        const double p2 = px[2];
        r0 += p0 * g;
        r1 += p1 * g;
        r2 += p2 * g;
        const double wg = (p0 * a0 + p1 * a1 + p2 * a2) * g;
        m0 += wg;
        m1 += wg * dx;
        m2 += wg * dx * dx;
      });
      d_cr += r0;
      d_cg += r1;
      d_cb += r2;
      d_mx += s.a * m1 + s.b * dy * m0;
      d_my += s.b * m1 + s.c * dy * m0;
      // u1 = cos dx + sin dy, u2 = -sin dx + cos dy.
      s_uu += cc * m2 + 2.0 * cs * dy * m1 + ss * dy * dy * m0;
      s_vv += ss * m2 - 2.0 * cs * dy * m1 + cc * dy * dy * m0;
      s_uv += -cs * m2 + (cc - ss) * dy * m1 + cs * dy * dy * m0;
    }
    const double d_ls1 = s_uu * s.inv_s1_sq;
    const double d_ls2 = s_vv * s.inv_s2_sq;
    const double d_th = -s_uv * (s.inv_s1_sq - s.inv_s2_sq);
    const double d_alpha = d_cr * s.color[0] + d_cg * s.color[1] + d_cb * s.color[2];
    ParamVector& pg = out.grads[static_cast<std::size_t>(i)];
    pg[kMuX] = d_mx;
    pg[kMuY] = d_my;
    pg[kLogScaleX] = d_ls1;
    pg[kLogScaleY] = d_ls2;
    pg[kTheta] = d_th;
    pg[kColorR] = d_cr * s.alpha;
    pg[kColorG] = d_cg * s.alpha;
    pg[kColorB] = d_cb * s.alpha;
    pg[kOpacityLogit] = d_alpha * s.alpha * (1.0 - s.alpha);
    out.position_grad_norm[static_cast<std::size_t>(i)] = std::hypot(d_mx, d_my);
  }
  return out;
}

}  // namespace freqsplat
