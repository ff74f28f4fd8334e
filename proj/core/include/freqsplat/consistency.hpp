// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "freqsplat/frequency_metric.hpp"

namespace freqsplat {

struct Thresholds {
  double tau_split = 0.8;
  double tau_prune = 0.8;
  double tau_alpha = 0.1;
  double eta_high = 1.0;
  double eta_low = 0.1;
  std::uint32_t min_obs = 3;

  void validate() const;
};

// Per-axis vote counters since the last densification event.
struct ConsistencyStats {
  std::array<std::uint32_t, 3> n_high{0, 0, 0};
  std::array<std::uint32_t, 3> n_low{0, 0, 0};
  AxisVector eta_max{0.0, 0.0, 0.0};
  std::uint32_t n_total = 0;

  bool operator==(const ConsistencyStats&) const = default;
};

struct Decision {
  enum class Kind { Keep, Split, Prune };

  Kind kind = Kind::Keep;
  std::array<bool, 3> split_axes{false, false, false};
  AxisVector eta_max{0.0, 0.0, 0.0};

  static Decision keep() { return {}; }
  static Decision prune() { return {Kind::Prune, {false, false, false}, {0.0, 0.0, 0.0}}; }
};

std::string_view to_string(Decision::Kind kind);

// Strict comparisons: eta == eta_high counts as neither high nor low.
ConsistencyStats record_observation(ConsistencyStats stats, const AxisVector& eta, const Thresholds& th);
inline ConsistencyStats record_observation(ConsistencyStats stats, const EtaSample& sample,
                                           const Thresholds& th) {
  return record_observation(stats, sample.eta, th);
}

// Componentwise counter sum and eta_max maximum. Associative and commutative;
// merging per-view partial stats equals recording the views sequentially.
ConsistencyStats merge(const ConsistencyStats& a, const ConsistencyStats& b);

// Keep below min_obs; Split if any axis has n_high/n_total > tau_split; Prune
// if every axis has n_low/n_total > tau_prune and opacity < tau_alpha.
Decision decide(const ConsistencyStats& stats, double opacity, const Thresholds& th);

ConsistencyStats reset(const ConsistencyStats& stats);

}  // namespace freqsplat
