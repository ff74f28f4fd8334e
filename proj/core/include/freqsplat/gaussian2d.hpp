// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>

namespace freqsplat {

// Image-plane Gaussian stored in its optimization parameterization: log
// scales keep s > 0 and a logit keeps opacity in (0, 1).
struct Gaussian2D {
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  Eigen::Vector2d log_scale = Eigen::Vector2d::Zero();
  double theta = 0.0;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();
  double opacity_logit = 0.0;
  std::uint64_t id = 0;

  Eigen::Vector2d scale() const { return log_scale.array().exp(); }
  double opacity() const { return 1.0 / (1.0 + std::exp(-opacity_logit)); }

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  // 1-sigma principal axis vectors R * (s_k e_k).
  std::array<Eigen::Vector2d, 2> axes() const {
    const Eigen::Matrix2d r = rotation();
    const Eigen::Vector2d s = scale();
    return {r.col(0) * s.x(), r.col(1) * s.y()};
  }
};

inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace freqsplat
