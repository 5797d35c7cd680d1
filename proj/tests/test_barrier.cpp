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

#include "rismc/barrier_solver.hpp"
#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

using namespace rismc;
using namespace rismc::barrier;

namespace {

ChannelRealization draw(int M, int N, int K, std::uint64_t seed) {
  RicianParams p;
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

BarrierState interior(const ChannelRealization& ch, double P, std::uint64_t seed) {
  CounterRng rng(seed);
  BarrierState s;
  s.Q = TransmitCovariance::scaled_identity(ch.M(), P, 0.5);
  s.theta = RVector(ch.N());
  for (int n = 0; n < ch.N(); ++n) s.theta(n) = rng.uniform_angle();
  s.gamma = 0.5 * min_snr(s.Q.Q, PhaseConfig(s.theta), ch);
  s.t = 2.0;
  return s;
}

}  // namespace

TEST(Barrier, ValueRejectsExteriorPoints) {
  const auto ch = draw(2, 2, 2, 1);
  BarrierState s = interior(ch, 1.0, 1);
  EXPECT_TRUE(is_interior(s, ch));
  EXPECT_NO_THROW(barrier_value(s, ch));
  s.gamma = 1e6;
  EXPECT_FALSE(is_interior(s, ch));
  EXPECT_THROW(barrier_value(s, ch), DomainError);
}

TEST(Barrier, GradientMatchesCentralDifferences) {
  const auto ch = draw(2, 3, 2, 2);
  const BarrierState s = interior(ch, 2.0, 2);
  const Direction d = gradients(s, ch);
  const double h = 1e-6;
  for (int n = 0; n < 3; ++n) {
    BarrierState a = s, b = s;
    a.theta(n) += h;
    b.theta(n) -= h;
    EXPECT_NEAR(d.dtheta(n), -(barrier_value(a, ch) - barrier_value(b, ch)) / (2 * h), 1e-5);
  }
  BarrierState a = s, b = s;
  a.Q.Q(0, 0) += h;
  b.Q.Q(0, 0) -= h;
  EXPECT_NEAR(d.dQ(0, 0).real(), -(barrier_value(a, ch) - barrier_value(b, ch)) / (2 * h), 1e-5);
  EXPECT_LT((d.dQ - d.dQ.adjoint()).norm(), 1e-12);
}

TEST(Barrier, BacktrackGivesSufficientDecrease) {
  const auto ch = draw(2, 2, 2, 3);
  const BarrierState s = interior(ch, 1.0, 3);
  const Direction d = gradients(s, ch);
  const BacktrackResult bt = backtrack(s, ch, d, 0.1, 0.5);
  ASSERT_FALSE(bt.stalled);
  const BarrierState next = step(s, d, bt.step);
  EXPECT_TRUE(is_interior(next, ch));
  EXPECT_LT(barrier_value(next, ch), barrier_value(s, ch) - 0.1 * bt.step * d.squared_norm() + 1e-12);
}

TEST(Barrier, SingleAntennaSingleUserMatchesAlignedPhases) {
  const auto ch = draw(1, 3, 1, 4);
  double aligned = std::abs(ch.t[0](0));
  for (int n = 0; n < 3; ++n) aligned += std::abs(ch.h[0](n) * ch.H(n, 0));
  BarrierConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 4;
  const SolveReport r = solve(ch, 10.0, cfg);
  EXPECT_NEAR(r.capacity_bits, std::log2(1.0 + 10.0 * aligned * aligned), 1e-4);
}

TEST(Barrier, TraceDecreasesWithinSegments) {
  const auto ch = draw(2, 2, 2, 5);
  BarrierConfig cfg;
  cfg.seed = 5;
  const SolveReport r = solve(ch, 10.0, cfg);
  std::size_t seg = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    while (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) < i) ++seg;
    if (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) == i) continue;
    EXPECT_LE(r.trace[i], r.trace[i - 1]);
  }
  EXPECT_NO_THROW(r.Q.validate());
}

TEST(Barrier, ConfigValidation) {
  BarrierConfig cfg;
  cfg.rho = 1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}
