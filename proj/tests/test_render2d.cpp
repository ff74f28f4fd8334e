// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freqsplat/render2d.hpp"
#include "support.hpp"

namespace freqsplat {
namespace {

constexpr int kW = 24;
constexpr int kH = 20;

std::vector<Gaussian2D> random_population(std::mt19937_64& rng, int count, int w = kW, int h = kH) {
  std::vector<Gaussian2D> pop(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Gaussian2D& g = pop[i];
    g.mu = {testing::uniform(rng, 2, w - 3), testing::uniform(rng, 2, h - 3)};
    g.log_scale = {std::log(testing::uniform(rng, 1.2, 5.0)), std::log(testing::uniform(rng, 1.2, 5.0))};
    g.theta = testing::uniform(rng, -3.0, 3.0);
    g.color = {testing::uniform(rng, 0, 1), testing::uniform(rng, 0, 1), testing::uniform(rng, 0, 1)};
    g.opacity_logit = testing::uniform(rng, -1.5, 1.5);
    g.id = i;
  }
  return pop;
}

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

TEST(Params, RoundTrip) {
  std::mt19937_64 rng(1);
  const auto pop = random_population(rng, 4);
  for (const Gaussian2D& g : pop) {
    Gaussian2D h;
    h.id = g.id;
    from_params(h, to_params(g));
    EXPECT_EQ(h.mu, g.mu);
    EXPECT_EQ(h.log_scale, g.log_scale);
    EXPECT_EQ(h.theta, g.theta);
    EXPECT_EQ(h.color, g.color);
    EXPECT_EQ(h.opacity_logit, g.opacity_logit);
  }
}

TEST(Render2d, EmptyPopulationIsBlack) {
  const ImageBuffer img = render2d({}, 8, 6);
  EXPECT_EQ(img.channels(), 3);
  for (double v : img.data()) EXPECT_EQ(v, 0.0);
}

TEST(Render2d, CenterValueIsOpacityTimesColor) {
  Gaussian2D g;
  g.mu = {5, 4};
  g.log_scale = {std::log(2.0), std::log(1.0)};
  g.theta = 0.3;
  g.color = {0.2, 0.6, 1.0};
  g.opacity_logit = logit(0.25);
  const std::vector<Gaussian2D> pop{g};
  const ImageBuffer img = render2d(pop, 11, 9);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(img.at(5, 4, c), 0.25 * g.color[c], 1e-15);
  // One sigma along the first axis.
  const double x = 5 + 2 * std::cos(0.3), y = 4 + 2 * std::sin(0.3);
  EXPECT_NEAR(testing::gaussian_weight(g, x, y), std::exp(-0.5), 1e-12);
}

TEST(Render2d, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pop = random_population(rng, 12);
    const ImageBuffer fast = render2d(pop, kW, kH);
    const ImageBuffer slow = testing::brute_render(pop, kW, kH, testing::truncation_mask(pop, kW, kH));
    EXPECT_LT(max_abs_diff(fast, slow), 1e-12);
  }
}

TEST(Render2d, ThinAndLargeGaussiansMatchOracle) {
  Gaussian2D thin;
  thin.mu = {10.3, 9.7};
  thin.log_scale = {std::log(8.0), std::log(0.05)};
  thin.theta = 0.9;
  thin.color = {1, 1, 1};
  Gaussian2D wide;
  wide.mu = {-3, 25};
  wide.log_scale = {std::log(30.0), std::log(12.0)};
  wide.color = {0.5, 0.1, 0.3};
  const std::vector<Gaussian2D> pop{thin, wide};
  const ImageBuffer fast = render2d(pop, kW, kH);
  const ImageBuffer slow = testing::brute_render(pop, kW, kH, testing::truncation_mask(pop, kW, kH));
  EXPECT_LT(max_abs_diff(fast, slow), 1e-12);
}

TEST(Render2d, AdditiveOverDisjointSets) {
  std::mt19937_64 rng(3);
  const auto pop = random_population(rng, 10);
  const std::vector<Gaussian2D> a(pop.begin(), pop.begin() + 4), b(pop.begin() + 4, pop.end());
  const ImageBuffer all = render2d(pop, kW, kH);
  const ImageBuffer ra = render2d(a, kW, kH), rb = render2d(b, kW, kH);
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_NEAR(all.data()[i], ra.data()[i] + rb.data()[i], 1e-13);
}

TEST(Render2d, OffscreenGaussianContributesNothing) {
  Gaussian2D g;
  g.mu = {-50, -50};
  g.color = {1, 1, 1};
  const std::vector<Gaussian2D> pop{g};
  const ImageBuffer img = render2d(pop, 8, 8);
  for (double v : img.data()) EXPECT_EQ(v, 0.0);
}

TEST(Loss, MatchesOracleAndPsnr) {
  std::mt19937_64 rng(4);
  const ImageBuffer a = testing::random_image(9, 7, 3, 1), b = testing::random_image(9, 7, 3, 2);
  EXPECT_NEAR(loss_value(a, b, 0.8, 0.2), testing::brute_loss(a, b, 0.8, 0.2), 1e-15);
  EXPECT_EQ(loss_value(a, a, 0.8, 0.2), 0.0);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  ImageBuffer shifted = a;
  for (double& v : shifted.data()) v = std::clamp(v, 0.0, 1.0);
  ImageBuffer off = shifted;
  for (double& v : off.data()) v += 0.1;
  EXPECT_NEAR(psnr(shifted, off), 20.0, 1e-9);
  EXPECT_THROW(loss_value(a, testing::random_image(9, 8, 3, 1), 1, 0), std::invalid_argument);
}

TEST(ToRgb, ReplicatesGray) {
  const ImageBuffer g = testing::random_image(5, 4, 1, 3);
  const ImageBuffer rgb = to_rgb(g);
  ASSERT_EQ(rgb.channels(), 3);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(rgb.at(3, 2, c), g.at(3, 2));
  EXPECT_THROW(to_rgb(testing::random_image(5, 4, 2, 3)), std::invalid_argument);
}

// Central differences of the frozen-mask loss. The mask fixes which pixels
// each Gaussian touches so the finite difference sees the same support as
// the analytic gradient. Targets sit at |0.05 + 0.2u| from the render so no
// residual crosses zero under the perturbation.
TEST(RenderGradients, MatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  constexpr double kStep = 1e-4;
  double worst = 0.0;
  for (int fixture = 0; fixture < 20; ++fixture) {
    const auto pop = random_population(rng, 5);
    const testing::PixelMask mask = testing::truncation_mask(pop, kW, kH);
    ImageBuffer target = testing::brute_render(pop, kW, kH, mask);
    for (double& v : target.data()) {
      const double sign = testing::uniform(rng, -1, 1) < 0 ? -1.0 : 1.0;
      v += sign * (0.05 + 0.2 * testing::uniform(rng, 0, 1));
    }
    const RenderGradients rg = render_gradients(pop, target, 0.8, 0.2);
    ASSERT_EQ(rg.grads.size(), pop.size());
    EXPECT_NEAR(rg.loss, testing::brute_loss(testing::brute_render(pop, kW, kH, mask), target, 0.8, 0.2), 1e-12);

    for (std::size_t i = 0; i < pop.size(); ++i) {
      for (int p = 0; p < kParamCount; ++p) {
        auto plus = pop, minus = pop;
        ParamVector vp = to_params(pop[i]), vm = vp;
        vp[static_cast<std::size_t>(p)] += kStep;
        vm[static_cast<std::size_t>(p)] -= kStep;
        from_params(plus[i], vp);
        from_params(minus[i], vm);
        const double lp = testing::brute_loss(testing::brute_render(plus, kW, kH, mask), target, 0.8, 0.2);
        const double lm = testing::brute_loss(testing::brute_render(minus, kW, kH, mask), target, 0.8, 0.2);
        const double fd = (lp - lm) / (2 * kStep);
        const double an = rg.grads[i][static_cast<std::size_t>(p)];
        const double rel = std::abs(fd - an) / std::max(std::abs(fd), 1e-6);
        worst = std::max(worst, rel);
        EXPECT_LT(rel, 1e-3) << "fixture " << fixture << " gaussian " << i << " param " << p << " fd " << fd
                             << " analytic " << an;
      }
      EXPECT_NEAR(rg.position_grad_norm[i], std::hypot(rg.grads[i][kMuX], rg.grads[i][kMuY]), 1e-15);
    }
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(RenderGradients, ZeroAtExactFit) {
  std::mt19937_64 rng(6);
  const auto pop = random_population(rng, 5);
  const ImageBuffer target = render2d(pop, kW, kH);
  const RenderGradients rg = render_gradients(pop, target, 0.8, 0.2);
  EXPECT_EQ(rg.loss, 0.0);
  for (const ParamVector& g : rg.grads) {
    for (double v : g) EXPECT_EQ(v, 0.0);
  }
}

TEST(RenderGradients, PositionGradientPointsTowardTarget) {
  Gaussian2D g;
  g.mu = {12, 10};
  g.log_scale = {std::log(2.5), std::log(2.5)};
  g.color = {1, 1, 1};
  g.opacity_logit = 2.0;
  Gaussian2D moved = g;
  moved.mu.x() += 2.0;
  const std::vector<Gaussian2D> target_pop{moved}, pop{g};
  const RenderGradients rg = render_gradients(pop, render2d(target_pop, kW, kH), 0.0, 1.0);
  EXPECT_LT(rg.grads[0][kMuX], 0.0);
  EXPECT_NEAR(rg.grads[0][kMuY], 0.0, 1e-12);
}

TEST(RenderGradients, RejectsShapeMismatch) {
  const std::vector<Gaussian2D> pop(1);
  EXPECT_THROW(render_gradients(pop, ImageBuffer(4, 4, 1), 1, 0), std::invalid_argument);
}

}  // namespace
}  // namespace freqsplat
