// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/consistency.hpp"

#include <algorithm>
#include <stdexcept>

namespace freqsplat {

void Thresholds::validate() const {
  auto fraction_ok = [](double t) { return t > 0.0 && t <= 1.0; };
  if (!fraction_ok(tau_split) || !fraction_ok(tau_prune) || !fraction_ok(tau_alpha)) {
    throw std::invalid_argument("thresholds: tau values must lie in (0, 1]");
  }
  if (!(eta_low >= 0.0 && eta_low < eta_high)) {
    throw std::invalid_argument("thresholds: require 0 <= eta_low < eta_high");
  }
}

std::string_view to_string(Decision::Kind kind) {
  switch (kind) {
    case Decision::Kind::Keep:
      return "keep";
    case Decision::Kind::Split:
      return "split";
    case Decision::Kind::Prune:
      return "prune";
  }
  return "unknown";
}

ConsistencyStats record_observation(ConsistencyStats stats, const AxisVector& eta, const Thresholds& th) {
  ++stats.n_total;
  for (std::size_t k = 0; k < 3; ++k) {
    if (eta[k] > th.eta_high) ++stats.n_high[k];
    if (eta[k] < th.eta_low) ++stats.n_low[k];
    stats.eta_max[k] = std::max(stats.eta_max[k], eta[k]);
  }
  return stats;
}

ConsistencyStats merge(const ConsistencyStats& a, const ConsistencyStats& b) {
  ConsistencyStats out;
  out.n_total = a.n_total + b.n_total;
  for (std::size_t k = 0; k < 3; ++k) {
    out.n_high[k] = a.n_high[k] + b.n_high[k];
    out.n_low[k] = a.n_low[k] + b.n_low[k];
    out.eta_max[k] = std::max(a.eta_max[k], b.eta_max[k]);
  }
  return out;
}

Decision decide(const ConsistencyStats& stats, double opacity, const Thresholds& th) {
  if (stats.n_total < th.min_obs || stats.n_total == 0) return Decision::keep();
  const double total = static_cast<double>(stats.n_total);

  Decision split{Decision::Kind::Split, {false, false, false}, stats.eta_max};
  bool any_split = false;
  for (std::size_t k = 0; k < 3; ++k) {
    if (static_cast<double>(stats.n_high[k]) / total > th.tau_split) {
      split.split_axes[k] = true;
      any_split = true;
    }
  }
  if (any_split) return split;

  const bool all_low = std::all_of(stats.n_low.begin(), stats.n_low.end(), [&](std::uint32_t n) {
    return static_cast<double>(n) / total > th.tau_prune;
  });
  if (all_low && opacity < th.tau_alpha) return Decision::prune();
  return Decision::keep();
}

ConsistencyStats reset(const ConsistencyStats&) { return ConsistencyStats{}; }

}  // namespace freqsplat
