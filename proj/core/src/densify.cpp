// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/densify.hpp"

#include <algorithm>
#include <cmath>

namespace freqsplat {

void SplitPlan::validate() const {
  if (std::any_of(n.begin(), n.end(), [](int v) { return v < 1; })) {
    throw std::invalid_argument("SplitPlan: counts must be >= 1");
  }
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("SplitPlan: p must lie in (0, 1]");
  if (!(kappa > 0.0)) throw std::invalid_argument("SplitPlan: kappa must be positive");
  if (cap < 1) throw std::invalid_argument("SplitPlan: cap must be >= 1");
}

int split_factor(double eta_max, double p, int cap) {
  if (std::isnan(eta_max) || eta_max <= 0.0) return 1;
  const double raw = std::ceil(std::pow(eta_max, p));
  const double clamped = std::min(static_cast<double>(std::max(cap, 1)), raw);
  return std::max(1, static_cast<int>(clamped));
}

std::array<int, 3> clamp_counts(std::array<int, 3> n, int cap) {
  cap = std::max(cap, 1);
  for (int& v : n) v = std::max(v, 1);
  const long product = static_cast<long>(n[0]) * n[1] * n[2];
  if (product <= cap) return n;

  const int active = static_cast<int>(std::count_if(n.begin(), n.end(), [](int v) { return v > 1; }));
  const double f = std::pow(static_cast<double>(cap) / static_cast<double>(product), 1.0 / active);
  for (int& v : n) {
    if (v > 1) v = std::max(1, static_cast<int>(std::floor(v * f)));
  }
  while (static_cast<long>(n[0]) * n[1] * n[2] > cap) {
    auto largest = std::max_element(n.begin(), n.end());
    --*largest;
  }
  return n;
}

SplitPlan plan_split(const Decision& decision, double p, double kappa, int cap, int dims) {
  SplitPlan plan;
  plan.p = p;
  plan.kappa = kappa;
  plan.cap = cap;
  if (decision.kind != Decision::Kind::Split) return plan;
  for (int k = 0; k < std::min(dims, 3); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (decision.split_axes[kk]) plan.n[kk] = split_factor(decision.eta_max[kk], p, cap);
  }
  plan.n = clamp_counts(plan.n, cap);
  return plan;
}

std::vector<Gaussian3D> grid_split(const Gaussian3D& parent, const SplitPlan& plan) {
  const std::array<int, 3> n = clamp_counts(plan.n, plan.cap);
  const Eigen::Matrix3d r = parent.rotation();
  const Eigen::Vector3d child_scale(parent.scale.x() / n[0], parent.scale.y() / n[1],
                                    parent.scale.z() / n[2]);
  std::vector<Gaussian3D> children;
  children.reserve(static_cast<std::size_t>(n[0] * n[1] * n[2]));
  for (int i = 0; i < n[0]; ++i) {
    for (int j = 0; j < n[1]; ++j) {
      for (int k = 0; k < n[2]; ++k) {
        const Eigen::Vector3d g(grid_coordinate(i, n[0], plan.kappa), grid_coordinate(j, n[1], plan.kappa),
                                grid_coordinate(k, n[2], plan.kappa));
        Gaussian3D child = parent;
        child.mu = parent.mu + r * parent.scale.cwiseProduct(g);
        child.scale = child_scale;
        children.push_back(child);
      }
    }
  }
  return children;
}

std::vector<Gaussian2D> grid_split(const Gaussian2D& parent, const SplitPlan& plan) {
  const std::array<int, 3> n = clamp_counts({plan.n[0], plan.n[1], 1}, plan.cap);
  const Eigen::Matrix2d r = parent.rotation();
  const Eigen::Vector2d s = parent.scale();
  const Eigen::Vector2d child_log_scale(parent.log_scale.x() - std::log(static_cast<double>(n[0])),
                                        parent.log_scale.y() - std::log(static_cast<double>(n[1])));
  std::vector<Gaussian2D> children;
  children.reserve(static_cast<std::size_t>(n[0] * n[1]));
  for (int i = 0; i < n[0]; ++i) {
    for (int j = 0; j < n[1]; ++j) {
      const Eigen::Vector2d g(grid_coordinate(i, n[0], plan.kappa), grid_coordinate(j, n[1], plan.kappa));
      Gaussian2D child = parent;
      child.mu = parent.mu + r * s.cwiseProduct(g);
      child.log_scale = child_log_scale;
      children.push_back(child);
    }
  }
  return children;
}

}  // namespace freqsplat
