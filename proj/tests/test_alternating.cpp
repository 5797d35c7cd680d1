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

#include "rismc/alternating.hpp"
#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

using namespace rismc;
using namespace rismc::alternating;

namespace {

ChannelRealization draw(int M, int N, int K, std::uint64_t seed) {
  RicianParams p;
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

}  // namespace

TEST(Alternating, QStepSingleUserIsMatchedFilter) {
  const auto ch = draw(3, 2, 1, 1);
  const PhaseConfig ph(RVector::Constant(2, 0.4));
  const QStep q = q_step(ph, ch, 5.0);
  EXPECT_NEAR(q.gamma, 5.0 * effective_channel(ph, ch, 0).squaredNorm(), 1e-5 * q.gamma);
}

TEST(Alternating, ThetaStepNeverLosesGround) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto ch = draw(2, 3, 3, 10 + seed);
    const TransmitCovariance Q = TransmitCovariance::scaled_identity(2, 4.0);
    CounterRng rng(seed);
    RVector th(3);
    for (int n = 0; n < 3; ++n) th(n) = rng.uniform_angle();
    AlternatingConfig cfg;
    cfg.theta_method = ThetaMethod::multistart;
    const ThetaStep ts = theta_step(Q, ch, th, cfg, seed);
    EXPECT_GE(ts.gamma, min_snr(Q.Q, PhaseConfig(th), ch) - 1e-12);
    EXPECT_NEAR(ts.gamma, min_snr(Q.Q, ts.phase, ch), 1e-9 * std::max(1.0, ts.gamma));
  }
}

TEST(Alternating, KrawczykAndMultistartAgreeOnSmallInstances) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto ch = draw(2, 2, 2, 20 + seed);
    AlternatingConfig a;
    a.theta_method = ThetaMethod::krawczyk;
    a.seed = seed;
    AlternatingConfig b = a;
    b.theta_method = ThetaMethod::multistart;
    EXPECT_NEAR(solve(ch, 10.0, a).capacity_bits, solve(ch, 10.0, b).capacity_bits, 5e-3);
  }
}

TEST(Alternating, GammaTraceIsMonotone) {
  const auto ch = draw(2, 3, 2, 30);
  AlternatingConfig cfg;
  cfg.J = 3;
  const SolveReport r = solve(ch, 10.0, cfg);
  ASSERT_FALSE(r.trace.empty());
  std::size_t seg = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    while (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) < i) ++seg;
    if (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) == i) continue;
    EXPECT_GE(r.trace[i], r.trace[i - 1] - 1e-9 * std::max(1.0, r.trace[i - 1]));
  }
  EXPECT_NO_THROW(r.Q.validate());
}

TEST(Alternating, ExtraInitIsNeverWorse) {
  const auto ch = draw(2, 3, 2, 31);
  AlternatingConfig cfg;
  cfg.J = 1;
  cfg.seed = 1;
  const SolveReport base = solve(ch, 10.0, cfg);
  cfg.extra_inits.push_back(base.phase.theta());
  EXPECT_GE(solve(ch, 10.0, cfg).capacity_bits, base.capacity_bits - 1e-6);
}

TEST(Alternating, KktResidualVanishesAtSolution) {
  const auto ch = draw(1, 2, 1, 32);
  AlternatingConfig cfg;
  const SolveReport r = solve(ch, 10.0, cfg);
  EXPECT_LT(kkt_residual(r.Q.Q, ch, r.phase.theta()), 1e-4);
}

TEST(Alternating, BuildKktRejectsOffSimplexWeights) {
  const auto ch = draw(2, 2, 2, 33);
  const TransmitCovariance Q = TransmitCovariance::scaled_identity(2, 1.0);
  EXPECT_THROW(build_kkt(Q, ch, RVector::Ones(2)), DomainError);
  const KktSystem sys = build_kkt(Q, ch, RVector::Constant(2, 0.5));
  // Residual equals minus the gradient of the weighted SNR sum.
  const RVector th = RVector::Constant(2, 1.0);
  RVector g = 0.5 * (snr_theta_gradient(Q.Q, PhaseConfig(th), ch, 0) + snr_theta_gradient(Q.Q, PhaseConfig(th), ch, 1));
  EXPECT_LT((sys.residual(th) + g).norm(), 1e-10 * std::max(1.0, g.norm()));
}

TEST(Alternating, ConfigValidation) {
  AlternatingConfig cfg;
  cfg.polish_max_lps = -1;
  EXPECT_THROW(cfg.validate(), DomainError);
}
