// Copyright 2026 The lrmac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lrmac/baselines.hpp"
#include "lrmac/channel.hpp"
#include "lrmac/errors.hpp"
#include "lrmac/rate.hpp"
#include "lrmac/waterfill.hpp"
#include "oracles.hpp"

namespace lrmac {
namespace {

ChannelSet flat(int users, int ly, int n_sc, double amp = 1.0) {
  ChannelSet ch;
  ch.noise_variance = 1.0;
  ch.H.assign(users, std::vector<CMatrix>(n_sc, CMatrix::Constant(ly, 1, amp)));
  return ch;
}

TEST(Oma, RoundRobinOwnership) {
  const auto a = round_robin_assignment(3, 8);
  EXPECT_EQ(a.subcarrier_owner, (std::vector<int>{0, 1, 2, 0, 1, 2, 0, 1}));
  EXPECT_EQ(a.subcarriers_of(2), (std::vector<int>{2, 5}));
}

TEST(Oma, SingleUserIsWaterFilling) {
  std::mt19937_64 rng(2);
  const auto ch = testing::random_channels(rng, 1, 2, 6);
  const auto r = oma_allocate(ch, EnergyBudget{{4.0}, {}});
  std::vector<double> g;
  for (int n = 0; n < 6; ++n) g.push_back(ch.H[0][n].squaredNorm());
  const auto wf = water_fill_budget(g, 4.0);
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(r.alloc.e(0, n), wf.powers[n], 1e-12);
}

TEST(Oma, FlatChannelEqualBudgetsEqualRates) {
  const auto ch = flat(4, 2, 16, 0.8);
  const auto r = oma_allocate(ch, EnergyBudget{{2.0, 2.0, 2.0, 2.0}, {}});
  const Eigen::VectorXd per = r.rates.per_user();
  // 4 subcarriers each at energy 0.5, MRC gain 2 * 0.64
  const double expect = 4.0 * std::log2(1.0 + 0.5 * 1.28);
  for (int u = 0; u < 4; ++u) EXPECT_NEAR(per[u], expect, 1e-12);
}

TEST(Oma, NoInterferenceUnderAnyOrder) {
  std::mt19937_64 rng(3);
  const auto ch = testing::random_channels(rng, 3, 2, 9);
  const auto r = oma_allocate(ch, EnergyBudget{{1.0, 2.0, 3.0}, {}});
  const auto other = sic_rates(ch, r.alloc, DecodingOrder({1, 2, 0}));
  EXPECT_NEAR((other.b - r.rates.b).norm(), 0.0, 1e-12);
  for (int n = 0; n < 9; ++n) {
    const int u = r.assignment.subcarrier_owner[n];
    EXPECT_NEAR(r.rates.b(u, n), std::log2(1.0 + r.alloc.e(u, n) * ch.H[u][n].squaredNorm()), 1e-12);
  }
}

TEST(Oma, TargetModeHitsTargets) {
  std::mt19937_64 rng(4);
  const auto ch = testing::random_channels(rng, 3, 2, 12);
  const auto r = oma_allocate(ch, RateRequirement{{5.0, 0.0, 8.0}, {}});
  const Eigen::VectorXd per = r.rates.per_user();
  EXPECT_NEAR(per[0], 5.0, 1e-9);
  EXPECT_EQ(per[1], 0.0);
  EXPECT_NEAR(per[2], 8.0, 1e-9);
}

TEST(Oma, Errors) {
  auto ch = flat(2, 1, 2);
  ch.H[1][1] = CMatrix::Zero(1, 1);
  EXPECT_THROW(oma_allocate(ch, RateRequirement{{1.0, 1.0}, {}}), Infeasible);
  const auto small = flat(3, 1, 2);
  EXPECT_THROW(oma_allocate(small, EnergyBudget{{1.0, 1.0, 1.0}, {}}), DomainError);
}

TEST(ChannelStrengthOrder, StrongestFirstTiesByIndex) {
  auto ch = flat(2, 1, 1);
  ch.H[0][0](0, 0) = 2.0;
  ch.H[1][0](0, 0) = 3.0;
  EXPECT_EQ(channel_strength_order(ch).to_string(), "2-1");
  EXPECT_EQ(channel_strength_order(flat(3, 2, 4)).to_string(), "1-2-3");
  auto boosted = flat(3, 2, 4);
  for (auto& h : boosted.H[2]) h *= 10.0;
  EXPECT_EQ(channel_strength_order(boosted).user_at(0), 2);
}

TEST(Noma, FlatPowerAndFullCapacity) {
  std::mt19937_64 rng(5);
  const auto ch = testing::random_channels(rng, 3, 2, 8);
  const auto r = noma_allocate(ch, EnergyBudget{{8.0, 4.0, 2.0}, {}});
  EXPECT_NEAR(r.alloc.e(0, 3), 1.0, 1e-15);
  EXPECT_NEAR(r.alloc.e(2, 7), 0.25, 1e-15);
  EXPECT_NEAR(r.rates.sum(), subset_capacity_mask(ch, r.alloc, 0b111), 1e-9);
  EXPECT_EQ(r.order, channel_strength_order(ch));
  EXPECT_NEAR((noma_rates(ch, EnergyBudget{{8.0, 4.0, 2.0}, {}}).b - r.rates.b).norm(), 0.0, 0.0);
}

TEST(Noma, SingleUserFlatRate) {
  const auto ch = flat(1, 1, 4, 2.0);
  const auto r = noma_rates(ch, EnergyBudget{{4.0}, {}});
  EXPECT_NEAR(r.sum(), 4.0 * std::log2(1.0 + 4.0), 1e-12);
}

TEST(McNoma, SingleUserIsWaterFilling) {
  std::mt19937_64 rng(6);
  const auto ch = testing::random_channels(rng, 1, 1, 5);
  const auto r = mc_noma_allocate(ch, EnergyBudget{{3.0}, {}});
  std::vector<double> g;
  for (int n = 0; n < 5; ++n) g.push_back(ch.H[0][n].squaredNorm());
  const auto wf = water_fill_budget(g, 3.0);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(r.alloc.e(0, n), wf.powers[n], 1e-12);
}

TEST(McNoma, DominatesNomaAndSpendsTheBudget) {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioConfig cfg;
    cfg.num_subcarriers = 16;
    cfg.seed = seed;
    const auto ch = generate_channels(cfg);
    const EnergyBudget budget{{1e-4, 1e-4, 1e-4}, {}};
    const auto mc = mc_noma_allocate(ch, budget);
    const auto flat_rates = noma_rates(ch, budget);
    if (mc.rates.sum() >= flat_rates.sum()) ++wins;
    const Eigen::VectorXd used = mc.alloc.per_user();
    for (int u = 0; u < 3; ++u) EXPECT_NEAR(used[u], 1e-4, 1e-12);
    EXPECT_NEAR(mc.rates.sum(), subset_capacity_mask(ch, mc.alloc, 0b111), 1e-9);
  }
  EXPECT_GE(wins, 19);
}

}  // namespace
}  // namespace lrmac
