// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "freqsplat/image.hpp"
#include "freqsplat/procedural.hpp"
#include "freqsplat/render2d.hpp"
#include "freqsplat/structure.hpp"
#include "freqsplat/trainer2d.hpp"

namespace {

using namespace freqsplat;

ImageBuffer noise_image(int size) {
  ImageBuffer img(size, size, 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : img.data()) v = u(rng);
  return img;
}

std::vector<Gaussian2D> lattice(int size, int grid) {
  TrainerConfig cfg;
  cfg.init_grid = grid;
  return initialize_population(make_procedural_target(size, size), cfg);
}

void BM_GaussianBlur(benchmark::State& state) {
  const ImageBuffer img = noise_image(static_cast<int>(state.range(0)));
  const double sigma = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, sigma));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_GaussianBlur)->Args({256, 1})->Args({256, 8})->Args({512, 4})->Unit(benchmark::kMillisecond);

void BM_AnalyzeStructure(benchmark::State& state) {
  const ImageBuffer img = make_procedural_target(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze_structure(img, {}));
}
BENCHMARK(BM_AnalyzeStructure)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Render2d(benchmark::State& state) {
  const auto pop = lattice(256, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(render2d(pop, 256, 256));
  state.counters["gaussians"] = static_cast<double>(pop.size());
}
BENCHMARK(BM_Render2d)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RenderGradients(benchmark::State& state) {
  const ImageBuffer target = make_procedural_target(256, 256);
  const auto pop = lattice(256, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(render_gradients(pop, target, 0.8, 0.2));
  state.counters["gaussians"] = static_cast<double>(pop.size());
}
BENCHMARK(BM_RenderGradients)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
