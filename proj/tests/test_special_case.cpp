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

#include "rismc/rng.hpp"
#include "rismc/special_case.hpp"

using namespace rismc;
using namespace rismc::special;

namespace {

ChannelRealization draw(int M, int N, int K, std::uint64_t seed) {
  RicianParams p;
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

}  // namespace

TEST(SpecialCase, SingleAntennaPhasesAlignEveryTerm) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ch = draw(1, 4, 1, seed);
    double aligned = std::abs(ch.t[0](0));
    for (int n = 0; n < 4; ++n) aligned += std::abs(ch.h[0](n) * ch.H(n, 0));
    const PhaseConfig ph(single_antenna_phases(ch, 0));
    EXPECT_NEAR(std::abs(effective_channel(ph, ch, 0)(0)), aligned, 1e-12);
  }
}

TEST(SpecialCase, P3BeatsRandomPhases) {
  // Property: the returned gain is at least that of any sampled phase vector.
  const auto ch = draw(3, 3, 1, 7);
  const P3Result r = solve_p3(ch, 0);
  CounterRng rng(7);
  for (int rep = 0; rep < 2000; ++rep) {
    RVector th(3);
    for (int n = 0; n < 3; ++n) th(n) = rng.uniform_angle();
    EXPECT_LE(effective_channel(PhaseConfig(th), ch, 0).squaredNorm(), r.gain * (1.0 + 1e-9));
  }
  EXPECT_NEAR(effective_channel(r.phase, ch, 0).squaredNorm(), r.gain, 1e-9 * r.gain);
}

TEST(SpecialCase, MisoCapacityAndRankOneCovariance) {
  const auto ch = draw(3, 2, 1, 8);
  const PhaseConfig ph(RVector::Constant(2, 0.2));
  const MisoResult m = miso_capacity_and_q(ph, ch, 0, 4.0);
  const double g2 = effective_channel(ph, ch, 0).squaredNorm();
  EXPECT_NEAR(m.capacity_bits, std::log2(1.0 + 4.0 * g2), 1e-12);
  EXPECT_NEAR(m.Q.Q.trace().real(), 4.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.Q.Q);
  EXPECT_NEAR(es.eigenvalues()(1), 0.0, 1e-10);
}

TEST(SpecialCase, DominatedUserDeterminesCapacity) {
  // User 1 sees three times user 0's channel, so user 0 is the bottleneck.
  const auto base = draw(2, 3, 1, 9);
  const auto ch = ChannelRealization::from_links(base.H, {base.h[0], 3.0 * base.h[0]}, {base.t[0], 3.0 * base.t[0]});
  const auto res = detect_and_solve(ch, 10.0);
  ASSERT_TRUE(res.has_value());
  EXPECT_EQ(res->k0, 0);
  const P3Result p3 = solve_p3(ch, 0);
  EXPECT_NEAR(res->capacity_bits, std::log2(1.0 + 10.0 * p3.gain), 1e-9);
  for (double m : res->margins) EXPECT_GE(m, -1e-9);
}

TEST(SpecialCase, OrthogonalUsersAreNotASpecialCase) {
  const CMatrix H = CMatrix::Zero(1, 2);
  CVector e1 = CVector::Zero(2), e2 = CVector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const auto ch = ChannelRealization::from_links(H, {CVector::Zero(1), CVector::Zero(1)}, {e1, e2});
  EXPECT_FALSE(detect_and_solve(ch, 1.0).has_value());
  EXPECT_EQ(solve(ch, 1.0).status, SolveStatus::skipped);
}
