// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/trainer2d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "freqsplat/frequency_metric.hpp"
#include "freqsplat/rng.hpp"
#include "freqsplat/text.hpp"

namespace freqsplat {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr double kBaselineShrink = 1.6;

std::string fmt_double(double v) {
  return format_double(v);
}

ProjectedGaussian project_2d(const Gaussian2D& g) {
  ProjectedGaussian pg;
  pg.mu2d = g.mu;
  const auto axes = g.axes();
  pg.axes = {axes[0], axes[1], Eigen::Vector2d::Zero()};
  pg.depth = 1.0;
  return pg;
}

ParamVector learning_rates(const LearningRates& lr, double position_lr) {
  return {position_lr, position_lr, lr.scale, lr.scale, lr.rotation,
          lr.color,    lr.color,    lr.color, lr.opacity};
}

void adam_step(Gaussian2D& g, AdamState& st, const ParamVector& grad, const ParamVector& lrs) {
  ParamVector p = to_params(g);
  ++st.step;
  const double bc1 = 1.0 - std::pow(kBeta1, st.step);
  const double bc2 = 1.0 - std::pow(kBeta2, st.step);
  for (std::size_t k = 0; k < p.size(); ++k) {
    st.m[k] = kBeta1 * st.m[k] + (1.0 - kBeta1) * grad[k];
    st.v[k] = kBeta2 * st.v[k] + (1.0 - kBeta2) * grad[k] * grad[k];
    const double m_hat = st.m[k] / bc1;
    const double v_hat = st.v[k] / bc2;
    p[k] -= lrs[k] * m_hat / (std::sqrt(v_hat) + kAdamEps);
  }
  from_params(g, p);
}

}  // namespace

std::string_view to_string(DensifyMode mode) {
  return mode == DensifyMode::Structure ? "structure" : "baseline";
}

DensifyMode parse_densify_mode(std::string_view text) {
  if (text == "structure") return DensifyMode::Structure;
  if (text == "baseline") return DensifyMode::Baseline;
  throw std::invalid_argument("unknown densify mode: " + std::string(text));
}

double LearningRates::position_at(int step, int total_steps) const {
  if (total_steps <= 0 || step >= total_steps) return position_final;
  if (step <= 0) return position;
  const double t = static_cast<double>(step) / total_steps;
  return std::exp((1.0 - t) * std::log(position) + t * std::log(position_final));
}

void TrainerConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("trainer.iterations must be >= 1");
  if (densify_interval < 1 || densify_interval > iterations) {
    throw std::invalid_argument("trainer.densify_interval must lie in [1, iterations]");
  }
  if (w1 < 0.0 || w2 < 0.0 || !(w1 + w2 > 0.0)) {
    throw std::invalid_argument("trainer loss weights must be >= 0 with w1 + w2 > 0");
  }
  if (init_grid < 1) throw std::invalid_argument("trainer.init_grid must be >= 1");
  if (!(init_jitter >= 0.0 && init_jitter < 1.0)) {
    throw std::invalid_argument("trainer.init_jitter must lie in [0, 1)");
  }
  if (!(init_opacity > 0.0 && init_opacity < 1.0)) {
    throw std::invalid_argument("trainer.init_opacity must lie in (0, 1)");
  }
  if (eta_samples < 1) throw std::invalid_argument("trainer.eta_samples must be >= 1");
  if (!(lr.position > 0.0 && lr.position_final > 0.0)) {
    throw std::invalid_argument("trainer position learning rates must be positive");
  }
  scale_space.validate();
  thresholds.validate();
  SplitPlan{{1, 1, 1}, split_kappa, split_p, split_cap}.validate();
}

int TrainReport::first_iteration_reaching(double target_psnr) const {
  for (const TrainRow& r : rows) {
    if (r.psnr >= target_psnr) return r.iteration;
  }
  return -1;
}

bool TrainReport::same_trajectory(const TrainReport& other) const {
  if (rows.size() != other.rows.size() || splits.size() != other.splits.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TrainRow& a = rows[i];
    const TrainRow& b = other.rows[i];
    if (a.iteration != b.iteration || a.loss != b.loss || a.psnr != b.psnr || a.gaussians != b.gaussians ||
        a.split_events != b.split_events || a.prune_events != b.prune_events) {
      return false;
    }
  }
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const SplitEvent& a = splits[i];
    const SplitEvent& b = other.splits[i];
    if (a.parent_id != b.parent_id || a.n != b.n || a.eta_max != b.eta_max || a.iteration != b.iteration ||
        a.x != b.x || a.y != b.y) {
      return false;
    }
  }
  return true;
}

std::vector<Gaussian2D> initialize_population(const ImageBuffer& target, const TrainerConfig& cfg) {
  const ImageBuffer rgb = to_rgb(target);
  const int w = rgb.width();
  const int h = rgb.height();
  const int n = cfg.init_grid;
  const double hx = static_cast<double>(w) / n;
  const double hy = static_cast<double>(h) / n;
  const double sigma = 0.5 * std::min(hx, hy);
  // Lattice coverage: sum of unit-peak Gaussians at spacing (hx, hy).
  const double coverage = 2.0 * std::numbers::pi * sigma * sigma / (hx * hy);
  const double amplitude = cfg.init_opacity * coverage;

  std::vector<Gaussian2D> pop;
  pop.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int x0 = static_cast<int>(std::floor(i * hx));
      const int x1 = std::max(x0 + 1, static_cast<int>(std::floor((i + 1) * hx)));
      const int y0 = static_cast<int>(std::floor(j * hy));
      const int y1 = std::max(y0 + 1, static_cast<int>(std::floor((j + 1) * hy)));
      Eigen::Vector3d mean = Eigen::Vector3d::Zero();
      int count = 0;
      for (int y = y0; y < std::min(y1, h); ++y) {
        for (int x = x0; x < std::min(x1, w); ++x) {
          mean += Eigen::Vector3d(rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2));
          ++count;
        }
      }
      if (count > 0) mean /= count;
      Gaussian2D g;
      SplitMixRng rng(derive_seed(cfg.seed, pop.size(), 0, 0));
      const double jx = (rng.uniform() - 0.5) * cfg.init_jitter * hx;
      const double jy = (rng.uniform() - 0.5) * cfg.init_jitter * hy;
      g.mu = {(i + 0.5) * hx - 0.5 + jx, (j + 0.5) * hy - 0.5 + jy};
      g.log_scale = Eigen::Vector2d::Constant(std::log(sigma));
      g.theta = 0.0;
      g.color = mean / amplitude;
      g.opacity_logit = logit(cfg.init_opacity);
      g.id = pop.size();
      pop.push_back(g);
    }
  }
  return pop;
}

std::vector<Gaussian2D> baseline_densify(const std::vector<Gaussian2D>& pop,
                                         std::span<const double> mean_position_grad, double threshold,
                                         std::uint64_t& next_id, std::vector<std::size_t>* parents) {
  if (mean_position_grad.size() != pop.size()) {
    throw std::invalid_argument("baseline_densify: gradient list does not match population");
  }
  std::vector<Gaussian2D> out;
  out.reserve(pop.size() * 2);
  if (parents) parents->clear();
  const double log_shrink = std::log(kBaselineShrink);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Gaussian2D& g = pop[i];
    if (!(mean_position_grad[i] > threshold)) {
      out.push_back(g);
      if (parents) parents->push_back(i);
      continue;
    }
    const auto axes = g.axes();
    const Eigen::Vector2d major = axes[0].squaredNorm() >= axes[1].squaredNorm() ? axes[0] : axes[1];
    for (const double side : {-0.5, 0.5}) {
      Gaussian2D child = g;
      child.mu = g.mu + side * major;
      child.log_scale = g.log_scale.array() - log_shrink;
      child.id = next_id++;
      out.push_back(child);
      if (parents) parents->push_back(pop.size());  // marks a newborn
    }
  }
  return out;
}

TrainResult run_training(const ImageBuffer& target_in, const TrainerConfig& cfg,
                         const TrainObserver& observer) {
  cfg.validate();
  const ImageBuffer target = to_rgb(target_in);
  validate_for_analysis(target);
  const int width = target.width();
  const int height = target.height();
  const bool structure_mode = cfg.mode == DensifyMode::Structure;

  TensorField field;
  if (structure_mode) field = analyze_structure(target, cfg.scale_space);

  TrainResult result;
  std::vector<Gaussian2D>& pop = result.population;
  pop = initialize_population(target, cfg);
  std::uint64_t next_id = pop.size();
  std::vector<AdamState> adam(pop.size());
  std::vector<ConsistencyStats> stats(pop.size());
  std::vector<EtaSample> last_eta(pop.size());
  std::vector<double> grad_sum(pop.size(), 0.0);
  std::vector<int> grad_obs(pop.size(), 0);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  int pending_splits = 0;
  int pending_prunes = 0;
  auto push_row = [&](int iteration, double loss, double quality) {
    TrainRow row{iteration, elapsed(), loss, quality, pop.size(), pending_splits, pending_prunes};
    pending_splits = 0;
    pending_prunes = 0;
    result.report.rows.push_back(row);
    if (observer) observer(row);
  };

  for (int t = 0; t < cfg.iterations; ++t) {
    const RenderGradients rg = render_gradients(pop, target, cfg.w1, cfg.w2);
    if (!std::isfinite(rg.loss)) {
      std::ostringstream msg;
      msg << "non-finite loss at iteration " << t << " with " << pop.size() << " Gaussians";
      for (std::size_t i = 0; i < pop.size(); ++i) {
        const ParamVector p = to_params(pop[i]);
        if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) {
          msg << "; first non-finite Gaussian id=" << pop[i].id;
          break;
        }
      }
      throw std::runtime_error(msg.str());
    }
    push_row(t, rg.loss, psnr(rg.render, target));

    const auto count = static_cast<std::ptrdiff_t>(pop.size());
    if (structure_mode) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const ProjectedGaussian pg = project_2d(pop[ui]);
        if (!in_expanded_frame(pg, width, height)) continue;
        EtaSample sample;
        sample.tensor = sample_footprint(pg, field, cfg.eta_samples,
                                         derive_seed(cfg.seed, pop[ui].id, 0, static_cast<std::uint64_t>(t)));
        sample.eta = cfg.use_eta_proj ? eta_proj(pg, sample.tensor)
                                      : eta(pg, sample.tensor, cfg.scale_space.epsilon);
        stats[ui] = record_observation(stats[ui], sample, cfg.thresholds);
        last_eta[ui] = sample;
      }
    } else {
      for (std::size_t i = 0; i < pop.size(); ++i) {
        grad_sum[i] += rg.position_grad_norm[i];
        ++grad_obs[i];
      }
    }

    const ParamVector lrs = learning_rates(cfg.lr, cfg.lr.position_at(t, cfg.iterations));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      adam_step(pop[ui], adam[ui], rg.grads[ui], lrs);
    }

    const int done = t + 1;
    if (done % cfg.densify_interval != 0 || done >= cfg.iterations) continue;

    if (structure_mode) {
      std::vector<Decision> decisions(pop.size());
      for (std::size_t i = 0; i < pop.size(); ++i) {
        decisions[i] = decide(stats[i], pop[i].opacity(), cfg.thresholds);
      }
      std::vector<std::size_t> order(pop.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      const std::vector<std::size_t> survivors = prune(order, decisions);
      pending_prunes += static_cast<int>(pop.size() - survivors.size());

      std::vector<Gaussian2D> next_pop;
      std::vector<AdamState> next_adam;
      std::vector<EtaSample> next_eta;
      next_pop.reserve(survivors.size());
      for (std::size_t i : survivors) {
        const Decision& d = decisions[i];
        if (d.kind == Decision::Kind::Split) {
          const SplitPlan plan = plan_split(d, cfg.split_p, cfg.split_kappa, cfg.split_cap, 2);
          if (plan.total() > 1) {
            for (Gaussian2D child : grid_split(pop[i], plan)) {
              child.id = next_id++;
              next_pop.push_back(child);
              next_adam.emplace_back();
              next_eta.emplace_back();
            }
            result.report.splits.push_back(
                {pop[i].id, plan.n, d.eta_max, done, pop[i].mu.x(), pop[i].mu.y()});
            ++pending_splits;
            continue;
          }
        }
        next_pop.push_back(pop[i]);
        next_adam.push_back(adam[i]);
        next_eta.push_back(last_eta[i]);
      }
      pop = std::move(next_pop);
      adam = std::move(next_adam);
      last_eta = std::move(next_eta);
      stats.assign(pop.size(), ConsistencyStats{});
    } else {
      std::vector<double> mean_grad(pop.size(), 0.0);
      for (std::size_t i = 0; i < pop.size(); ++i) {
        mean_grad[i] = grad_obs[i] > 0 ? grad_sum[i] / grad_obs[i] : 0.0;
      }
      std::vector<std::size_t> parents;
      const std::size_t before = pop.size();
      std::vector<Gaussian2D> next_pop = baseline_densify(pop, mean_grad, cfg.baseline_threshold, next_id, &parents);
      std::vector<AdamState> next_adam;
      next_adam.reserve(next_pop.size());
      for (std::size_t k = 0; k < next_pop.size(); ++k) {
        next_adam.push_back(parents[k] < before ? adam[parents[k]] : AdamState{});
      }
      for (std::size_t i = 0; i < before; ++i) {
        if (mean_grad[i] > cfg.baseline_threshold) {
          result.report.splits.push_back({pop[i].id, {2, 1, 1}, {0.0, 0.0, 0.0}, done, pop[i].mu.x(), pop[i].mu.y()});
          ++pending_splits;
        }
      }
      pop = std::move(next_pop);
      adam = std::move(next_adam);
      grad_sum.assign(pop.size(), 0.0);
      grad_obs.assign(pop.size(), 0);
      last_eta.assign(pop.size(), EtaSample{});
      stats.assign(pop.size(), ConsistencyStats{});
    }
  }

  const ImageBuffer final_render = render2d(pop, width, height);
  push_row(cfg.iterations, loss_value(final_render, target, cfg.w1, cfg.w2), psnr(final_render, target));
  result.stats = std::move(stats);
  result.last_eta = std::move(last_eta);
  return result;
}

void write_report_csv(std::ostream& out, const TrainReport& report) {
  out << "iteration,loss,psnr,gaussians,split_events,prune_events\n";
  for (const TrainRow& r : report.rows) {
    out << r.iteration << ',' << fmt_double(r.loss) << ',' << fmt_double(r.psnr) << ',' << r.gaussians << ','
        << r.split_events << ',' << r.prune_events << '\n';
  }
}

void write_timing_csv(std::ostream& out, const TrainReport& report) {
  out << "iteration,wall_time\n";
  for (const TrainRow& r : report.rows) out << r.iteration << ',' << fmt_double(r.wall_seconds) << '\n';
}

void write_split_events_csv(std::ostream& out, const std::vector<SplitEvent>& events) {
  out << "parent_id,n_x,n_y,n_z,eta_max_x,eta_max_y,eta_max_z,iteration,x,y\n";
  for (const SplitEvent& e : events) {
    out << e.parent_id << ',' << e.n[0] << ',' << e.n[1] << ',' << e.n[2] << ',' << fmt_double(e.eta_max[0])
        << ',' << fmt_double(e.eta_max[1]) << ',' << fmt_double(e.eta_max[2]) << ',' << e.iteration << ','
        << fmt_double(e.x) << ',' << fmt_double(e.y) << '\n';
  }
}

void write_eta_csv(std::ostream& out, const std::vector<Gaussian2D>& pop, const std::vector<EtaSample>& samples) {
  out << "gaussian_id,view_id,eta_x,eta_y,eta_z\n";
  for (std::size_t i = 0; i < pop.size() && i < samples.size(); ++i) {
    const EtaSample& s = samples[i];
    out << pop[i].id << ',' << s.view_id << ',' << fmt_double(s.eta[0]) << ',' << fmt_double(s.eta[1]) << ','
        << fmt_double(s.eta[2]) << '\n';
  }
}

void write_stats_csv(std::ostream& out, const std::vector<Gaussian2D>& pop,
                     const std::vector<ConsistencyStats>& stats) {
  out << "gaussian_id,n_total,n_high_x,n_high_y,n_high_z,n_low_x,n_low_y,n_low_z,eta_max_x,eta_max_y,eta_max_z\n";
  for (std::size_t i = 0; i < pop.size() && i < stats.size(); ++i) {
    const ConsistencyStats& s = stats[i];
    out << pop[i].id << ',' << s.n_total;
    for (auto v : s.n_high) out << ',' << v;
    for (auto v : s.n_low) out << ',' << v;
    for (auto v : s.eta_max) out << ',' << fmt_double(v);
    out << '\n';
  }
}

}  // namespace freqsplat
