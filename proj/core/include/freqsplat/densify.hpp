// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "freqsplat/consistency.hpp"
#include "freqsplat/gaussian2d.hpp"
#include "freqsplat/projection.hpp"

namespace freqsplat {

struct SplitPlan {
  std::array<int, 3> n{1, 1, 1};
  double kappa = 1.0;  // grid half-extent in parent sigma units
  double p = 0.5;      // split exponent
  int cap = 64;        // maximum children per split event

  int total() const { return n[0] * n[1] * n[2]; }
  void validate() const;
};

struct SplitEvent {
  std::uint64_t parent_id = 0;
  std::array<int, 3> n{1, 1, 1};
  AxisVector eta_max{0.0, 0.0, 0.0};
  int iteration = 0;
  double x = 0.0;  // parent center, image-plane pixels for 2D
  double y = 0.0;
};

// min(cap, ceil(eta_max^p)), at least 1.
int split_factor(double eta_max, double p, int cap);

// Shrinks per-axis counts proportionally until their product fits in cap.
std::array<int, 3> clamp_counts(std::array<int, 3> n, int cap);

// Cell-centered grid coordinate in [-kappa, kappa] for index i of n.
inline double grid_coordinate(int i, int n, double kappa) {
  return kappa * (2.0 * (i + 0.5) / n - 1.0);
}

// Per-axis counts for a Split decision; non-eligible axes get 1. `dims`
// limits the axes considered (2 for image-plane Gaussians).
SplitPlan plan_split(const Decision& decision, double p, double kappa, int cap, int dims = 3);

// Children on a centered n_x x n_y x n_z grid: mu + R (s * g), scale s / n.
// Rotation, opacity, color and id are copied from the parent.
std::vector<Gaussian3D> grid_split(const Gaussian3D& parent, const SplitPlan& plan);

// Image-plane variant; n[2] is ignored.
std::vector<Gaussian2D> grid_split(const Gaussian2D& parent, const SplitPlan& plan);

// Removes exactly the Prune-marked entries, preserving survivor order.
template <typename T>
std::vector<T> prune(const std::vector<T>& population, std::span<const Decision> decisions) {
  if (population.size() != decisions.size()) {
    throw std::invalid_argument("prune: population and decisions differ in size");
  }
  std::vector<T> out;
  out.reserve(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (decisions[i].kind != Decision::Kind::Prune) out.push_back(population[i]);
  }
  return out;
}

}  // namespace freqsplat
