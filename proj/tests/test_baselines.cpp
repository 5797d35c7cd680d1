/* Copyright 2026 The rismc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>

#include "rismc/alternating.hpp"
#include "rismc/baselines.hpp"
#include "rismc/rng.hpp"

using namespace rismc;
using namespace rismc::baselines;

namespace {

ChannelRealization draw(int M, int N, int K, std::uint64_t seed) {
  RicianParams p;
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

}  // namespace

TEST(BruteForce, RefusesOversizedGrids) {
  const auto ch = draw(3, 2, 2, 1);
  const BruteForceResult r = brute_force(ch, 1.0, GridSpec{});
  EXPECT_EQ(r.report.status, SolveStatus::refused);
  EXPECT_FALSE(r.report.warnings.empty());
  GridSpec g;
  g.budget = 10.0;
  EXPECT_EQ(brute_force(draw(1, 2, 2, 1), 1.0, g).report.status, SolveStatus::refused);
}

TEST(BruteForce, SerialEqualsParallel) {
  const auto ch = draw(2, 2, 2, 2);
  GridSpec g;
  g.phase_levels = 24;
  g.cov_levels = 6;
  const BruteForceResult a = brute_force(ch, 2.0, g, false);
  const BruteForceResult b = brute_force(ch, 2.0, g, true);
  EXPECT_EQ(a.report.capacity_bits, b.report.capacity_bits);
  EXPECT_EQ((a.report.phase.theta() - b.report.phase.theta()).norm(), 0.0);
}

TEST(BruteForce, ErrorBoundCoversAlternatingOptimum) {
  // Property: no solver may beat the grid optimum by more than its certified gap.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto ch = draw(1, 2, 2, 10 + seed);
    GridSpec g;
    g.phase_levels = 90;
    const BruteForceResult bf = brute_force(ch, 1.0, g);
    alternating::AlternatingConfig cfg;
    cfg.seed = seed;
    const SolveReport alt = alternating::solve(ch, 1.0, cfg);
    EXPECT_LE(alt.capacity_bits, bf.report.capacity_bits + bf.error_bound_bits + 1e-9);
    EXPECT_NEAR(min_rate(bf.report.Q, bf.report.phase, ch).value, bf.report.capacity_bits, 1e-9);
  }
}

TEST(Beamforming, NeverExceedsJointOptimization) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto ch = draw(2, 2, 2, 20 + seed);
    BeamformingConfig bc;
    bc.seed = seed;
    const BeamformingResult bf = beamforming(ch, 10.0, bc);
    EXPECT_NEAR(bf.v.squaredNorm(), 10.0, 1e-9);
    alternating::AlternatingConfig ac;
    ac.seed = seed;
    ac.extra_inits.push_back(bf.phase.theta());
    EXPECT_GE(alternating::solve(ch, 10.0, ac).capacity_bits, bf.rate_bits - 1e-6);
  }
}

TEST(NoRis, SingleUserUsesFullDirectGain) {
  const auto ch = draw(3, 4, 1, 30);
  const SolveReport r = no_ris(ch, 5.0);
  EXPECT_NEAR(r.capacity_bits, std::log2(1.0 + 5.0 * ch.t[0].squaredNorm()), 1e-5);
}

TEST(NoRis, DirectLinksOnlyDropsReflectedPaths) {
  const auto ch = draw(2, 3, 2, 31);
  const auto d = direct_links_only(ch);
  EXPECT_EQ(d.H.norm(), 0.0);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(d.cascade[k].norm(), 0.0);
    EXPECT_EQ((d.t[k] - ch.t[k]).norm(), 0.0);
  }
}
