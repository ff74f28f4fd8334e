// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freqsplat/consistency.hpp"
#include "freqsplat/densify.hpp"
#include "freqsplat/gaussian2d.hpp"
#include "freqsplat/image.hpp"
#include "freqsplat/render2d.hpp"
#include "freqsplat/structure.hpp"

namespace freqsplat {

enum class DensifyMode { Structure, Baseline };

std::string_view to_string(DensifyMode mode);
DensifyMode parse_densify_mode(std::string_view text);

struct LearningRates {
  double position = 0.2;         // pixels, decays exponentially to position_final
  double position_final = 0.002;
  double scale = 0.01;          // log-scale
  double rotation = 0.01;       // radians
  double color = 0.01;
  double opacity = 0.02;        // logit

  // Exponential interpolation; exactly position_final at step >= total_steps.
  double position_at(int step, int total_steps) const;
};

struct TrainerConfig {
  int iterations = 3000;
  int densify_interval = 500;
  LearningRates lr;
  double w1 = 0.8;  // l1 weight
  double w2 = 0.2;  // l2 weight
  DensifyMode mode = DensifyMode::Structure;
  double baseline_threshold = 5e-6;
  std::uint64_t seed = 0;
  int init_grid = 32;
  double init_jitter = 0.25;  // seeded offset of lattice means, in cells
  double init_opacity = 0.5;
  int eta_samples = 1;
  bool use_eta_proj = false;

  ScaleSpaceConfig scale_space;
  Thresholds thresholds;
  double split_p = 0.5;
  double split_kappa = 1.0;
  int split_cap = 64;

  void validate() const;
};

// Adaptive-moment optimizer state for one Gaussian.
struct AdamState {
  ParamVector m{};
  ParamVector v{};
  int step = 0;
};

struct TrainRow {
  int iteration = 0;
  double wall_seconds = 0.0;
  double loss = 0.0;
  double psnr = 0.0;
  std::size_t gaussians = 0;
  int split_events = 0;
  int prune_events = 0;
};

struct TrainReport {
  std::vector<TrainRow> rows;
  std::vector<SplitEvent> splits;

  // First iteration whose PSNR reaches `target`, or -1.
  int first_iteration_reaching(double target_psnr) const;
  double final_psnr() const { return rows.empty() ? 0.0 : rows.back().psnr; }
  std::size_t final_count() const { return rows.empty() ? 0 : rows.back().gaussians; }

  // Column-for-column equality of everything except wall time.
  bool same_trajectory(const TrainReport& other) const;
};

struct TrainResult {
  std::vector<Gaussian2D> population;
  TrainReport report;
  std::vector<ConsistencyStats> stats;      // structure mode, since last event
  std::vector<EtaSample> last_eta;          // structure mode, final iteration
};

// init_grid x init_grid isotropic Gaussians, colors from local target means.
// Means are offset by up to +-init_jitter/2 cells, keyed on cfg.seed.
std::vector<Gaussian2D> initialize_population(const ImageBuffer& target, const TrainerConfig& cfg);

// Gaussians whose mean positional gradient exceeds threshold become two
// children at mu -/+ 0.5 sigma along the major axis, scales divided by 1.6.
// New children receive ids from next_id.
std::vector<Gaussian2D> baseline_densify(const std::vector<Gaussian2D>& pop,
                                         std::span<const double> mean_position_grad, double threshold,
                                         std::uint64_t& next_id, std::vector<std::size_t>* parents = nullptr);

// Observer invoked after each recorded row; lets callers stream progress.
using TrainObserver = std::function<void(const TrainRow&)>;

// Fits the target. Throws std::runtime_error on a non-finite loss.
TrainResult run_training(const ImageBuffer& target, const TrainerConfig& cfg,
                         const TrainObserver& observer = {});

// CSV writers. The report omits wall time (see write_timing_csv) so that
// reruns with the same seed produce byte-identical files.
void write_report_csv(std::ostream& out, const TrainReport& report);
void write_timing_csv(std::ostream& out, const TrainReport& report);
void write_split_events_csv(std::ostream& out, const std::vector<SplitEvent>& events);
void write_eta_csv(std::ostream& out, const std::vector<Gaussian2D>& pop,
                   const std::vector<EtaSample>& samples);
void write_stats_csv(std::ostream& out, const std::vector<Gaussian2D>& pop,
                     const std::vector<ConsistencyStats>& stats);

}  // namespace freqsplat
