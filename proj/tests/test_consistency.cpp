// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "freqsplat/consistency.hpp"

namespace freqsplat {
namespace {

const Thresholds kDefaults{};

ConsistencyStats record_all(const std::vector<AxisVector>& views, const Thresholds& th = kDefaults) {
  ConsistencyStats s;
  for (const AxisVector& e : views) s = record_observation(s, e, th);
  return s;
}

std::vector<AxisVector> views_with_high_x(int high, int total) {
  std::vector<AxisVector> v;
  for (int i = 0; i < total; ++i) v.push_back({i < high ? 2.0 + i : 0.5, 0.5, 0.5});
  return v;
}

TEST(Thresholds, DefaultsAndValidation) {
  EXPECT_EQ(kDefaults.tau_split, 0.8);
  EXPECT_EQ(kDefaults.tau_prune, 0.8);
  EXPECT_EQ(kDefaults.tau_alpha, 0.1);
  EXPECT_EQ(kDefaults.eta_high, 1.0);
  EXPECT_EQ(kDefaults.eta_low, 0.1);
  EXPECT_EQ(kDefaults.min_obs, 3u);
  EXPECT_NO_THROW(kDefaults.validate());
  Thresholds t;
  t.tau_split = 0.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = {};
  t.eta_low = 1.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(RecordObservation, Examples) {
  const ConsistencyStats s = record_observation({}, AxisVector{2.0, 0.05, 0.5}, kDefaults);
  EXPECT_EQ(s.n_total, 1u);
  EXPECT_EQ(s.n_high, (std::array<std::uint32_t, 3>{1, 0, 0}));
  EXPECT_EQ(s.n_low, (std::array<std::uint32_t, 3>{0, 1, 0}));
  EXPECT_EQ(s.eta_max, (AxisVector{2.0, 0.05, 0.5}));

  const ConsistencyStats boundary = record_observation({}, AxisVector{1.0, 0.1, 1.0}, kDefaults);
  EXPECT_EQ(boundary.n_high, (std::array<std::uint32_t, 3>{0, 0, 0}));
  EXPECT_EQ(boundary.n_low, (std::array<std::uint32_t, 3>{0, 0, 0}));

  const ConsistencyStats twice = record_observation(s, AxisVector{2.0, 0.05, 0.5}, kDefaults);
  EXPECT_EQ(twice.n_total, 2u);
  EXPECT_EQ(twice.n_high[0], 2u);
  EXPECT_EQ(twice.n_low[1], 2u);
}

TEST(RecordObservation, CounterInvariants) {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> dist(1.0);
  ConsistencyStats s;
  for (int i = 0; i < 500; ++i) {
    s = record_observation(s, AxisVector{dist(rng), dist(rng), dist(rng)}, kDefaults);
    for (std::size_t k = 0; k < 3; ++k) {
      ASSERT_LE(s.n_high[k] + s.n_low[k], s.n_total);
      if (s.n_high[k] > 0) {
        ASSERT_GE(s.eta_max[k], kDefaults.eta_high);
      }
    }
  }
}

TEST(Decide, DecisionTable) {
  EXPECT_EQ(decide(record_all(views_with_high_x(9, 10)), 0.5, kDefaults).kind, Decision::Kind::Split);
  EXPECT_EQ(decide(record_all(views_with_high_x(8, 10)), 0.5, kDefaults).kind, Decision::Kind::Keep);

  ConsistencyStats low;
  low.n_total = 10;
  low.n_low = {9, 9, 10};
  EXPECT_EQ(decide(low, 0.05, kDefaults).kind, Decision::Kind::Prune);
  EXPECT_EQ(decide(low, 0.1, kDefaults).kind, Decision::Kind::Keep);  // opacity not below tau_alpha
  low.n_low = {9, 8, 10};
  EXPECT_EQ(decide(low, 0.05, kDefaults).kind, Decision::Kind::Keep);  // one axis at the boundary
}

TEST(Decide, SplitCarriesMaskAndMaxima) {
  std::vector<AxisVector> views;
  for (int i = 0; i < 10; ++i) views.push_back({3.0 + i, i == 0 ? 0.5 : 1.5, 0.2});
  const Decision d = decide(record_all(views), 0.5, kDefaults);
  ASSERT_EQ(d.kind, Decision::Kind::Split);
  EXPECT_EQ(d.split_axes, (std::array<bool, 3>{true, true, false}));
  EXPECT_EQ(d.eta_max, (AxisVector{12.0, 1.5, 0.2}));
}

TEST(Decide, BelowMinObsKeeps) {
  const ConsistencyStats s = record_all({{5, 5, 5}, {5, 5, 5}});
  EXPECT_EQ(decide(s, 0.5, kDefaults).kind, Decision::Kind::Keep);
  EXPECT_EQ(decide(record_all({{5, 5, 5}, {5, 5, 5}, {5, 5, 5}}), 0.5, kDefaults).kind, Decision::Kind::Split);
}

TEST(Decide, PermutationInvariant) {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> dist(0.7);
  std::vector<AxisVector> views(10);
  for (auto& v : views) v = {dist(rng) * 3, dist(rng), dist(rng) * 0.1};
  const ConsistencyStats ref = record_all(views);
  const Decision d = decide(ref, 0.05, kDefaults);
  for (int shuffle = 0; shuffle < 100; ++shuffle) {
    std::shuffle(views.begin(), views.end(), rng);
    const ConsistencyStats s = record_all(views);
    EXPECT_EQ(s, ref);
    const Decision e = decide(s, 0.05, kDefaults);
    EXPECT_EQ(e.kind, d.kind);
    EXPECT_EQ(e.split_axes, d.split_axes);
  }
}

TEST(Decide, SplitAndPruneAreExclusive) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> n(0, 20);
  for (int trial = 0; trial < 5000; ++trial) {
    ConsistencyStats s;
    s.n_total = 20;
    for (std::size_t k = 0; k < 3; ++k) {
      s.n_high[k] = n(rng);
      s.n_low[k] = std::min<std::uint32_t>(n(rng), 20 - s.n_high[k]);
    }
    const Decision d = decide(s, 0.01, kDefaults);
    const bool splits = std::any_of(s.n_high.begin(), s.n_high.end(), [](std::uint32_t h) { return h / 20.0 > 0.8; });
    const bool prunes = std::all_of(s.n_low.begin(), s.n_low.end(), [](std::uint32_t l) { return l / 20.0 > 0.8; });
    EXPECT_FALSE(splits && prunes);
    EXPECT_EQ(d.kind == Decision::Kind::Split, splits);
    EXPECT_EQ(d.kind == Decision::Kind::Prune, prunes);
  }
}

TEST(Decide, MonotoneInSplitThreshold) {
  const ConsistencyStats one_high = record_all({{2, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}});
  Thresholds never = kDefaults;
  never.tau_split = 1.0 + 1e-12;
  Thresholds always = kDefaults;
  always.tau_split = 0.0;
  const ConsistencyStats all_high = record_all(views_with_high_x(10, 10));
  EXPECT_EQ(decide(all_high, 0.5, never).kind, Decision::Kind::Keep);
  EXPECT_EQ(decide(one_high, 0.5, always).kind, Decision::Kind::Split);
}

TEST(Merge, EqualsSequentialRecording) {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> dist(1.0);
  std::vector<AxisVector> views(30);
  for (auto& v : views) v = {dist(rng), dist(rng), dist(rng)};
  const ConsistencyStats sequential = record_all(views);
  for (std::size_t cut = 0; cut <= views.size(); cut += 5) {
    const ConsistencyStats a = record_all({views.begin(), views.begin() + static_cast<std::ptrdiff_t>(cut)});
    const ConsistencyStats b = record_all({views.begin() + static_cast<std::ptrdiff_t>(cut), views.end()});
    EXPECT_EQ(merge(a, b), sequential);
    EXPECT_EQ(merge(b, a), sequential);
  }
  const ConsistencyStats x = record_all({views.begin(), views.begin() + 10});
  const ConsistencyStats y = record_all({views.begin() + 10, views.begin() + 20});
  const ConsistencyStats z = record_all({views.begin() + 20, views.end()});
  EXPECT_EQ(merge(merge(x, y), z), merge(x, merge(y, z)));
}

TEST(Reset, ZeroesAndIsIdempotent) {
  const ConsistencyStats s = record_all(views_with_high_x(9, 10));
  const ConsistencyStats r = reset(s);
  EXPECT_EQ(r, ConsistencyStats{});
  EXPECT_EQ(reset(r), r);
  EXPECT_EQ(decide(r, 0.5, kDefaults).kind, Decision::Kind::Keep);
}

TEST(DecisionKind, Names) {
  EXPECT_EQ(to_string(Decision::Kind::Keep), "keep");
  EXPECT_EQ(to_string(Decision::Kind::Split), "split");
  EXPECT_EQ(to_string(Decision::Kind::Prune), "prune");
}

}  // namespace
}  // namespace freqsplat
