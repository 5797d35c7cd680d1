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

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"
#include "rismc/robust.hpp"

using namespace rismc;
using namespace rismc::baselines;

namespace {

ChannelRealization draw(int M, int N, int K, std::uint64_t seed) {
  RicianParams p;
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

CVector random_vector(int n, CounterRng& rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
  return v;
}

CMatrix random_ball_point(int N, int M, double eps, CounterRng& rng) {
  CMatrix d(N, M);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < M; ++b) d(a, b) = rng.complex_gaussian();
  return d * (eps * std::pow(rng.uniform(), 1.0 / (2.0 * N * M)) / d.norm());
}

double min_eig(const CMatrix& A) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST(Robust, WorstCaseIsAttainedByAlignedError) {
  CounterRng rng(1);
  const auto ch = draw(2, 3, 1, 1);
  const UncertaintyModel model{ch, {0.3}, 1.0};
  const CVector v = random_vector(2, rng);
  const PhaseConfig ph(RVector::Constant(3, 0.7));
  const Complex s = perturbed_signal(model, v, ph, 0, CMatrix::Zero(3, 2));
  const CVector u = ph.u();
  const CMatrix adversary = -0.3 * (s / std::abs(s)) * u.conjugate() * v.adjoint() / (u.norm() * v.norm());
  EXPECT_NEAR(adversary.norm(), 0.3, 1e-12);
  EXPECT_NEAR(std::norm(perturbed_signal(model, v, ph, 0, adversary)), worst_case_snr(model, v, ph, 0), 1e-10);
  for (int rep = 0; rep < 500; ++rep) {
    const CMatrix d = random_ball_point(3, 2, 0.3, rng);
    EXPECT_GE(std::norm(perturbed_signal(model, v, ph, 0, d)), worst_case_snr(model, v, ph, 0) - 1e-12);
  }
}

TEST(Robust, PerturbedSignalIsAffineInTheError) {
  CounterRng rng(2);
  const auto ch = draw(2, 2, 1, 2);
  const UncertaintyModel model{ch, {0.1}, 1.0};
  const CVector v = random_vector(2, rng);
  const PhaseConfig ph(RVector::Constant(2, 0.2));
  const CMatrix a = random_ball_point(2, 2, 1.0, rng), b = random_ball_point(2, 2, 1.0, rng);
  const Complex s0 = perturbed_signal(model, v, ph, 0, CMatrix::Zero(2, 2));
  const Complex sa = perturbed_signal(model, v, ph, 0, a), sb = perturbed_signal(model, v, ph, 0, b);
  EXPECT_LT(std::abs(perturbed_signal(model, v, ph, 0, a + b) - (sa + sb - s0)), 1e-12);
}

TEST(Robust, CertificateImpliesTargetOverTheBall) {
  // Property: a PSD certificate at the reference point guarantees the target
  // for every error in the ball.
  CounterRng rng(3);
  int certified = 0;
  for (int inst = 0; inst < 40; ++inst) {
    const auto ch = draw(2, 2, 1, 100 + inst);
    const UncertaintyModel model{ch, {0.2}, 0.5};
    const CVector v = 3.0 * random_vector(2, rng);
    RVector th(2);
    for (int n = 0; n < 2; ++n) th(n) = rng.uniform_angle();
    const PhaseConfig ph(th);
    for (double slack : {0.1, 1.0, 10.0}) {
      const CMatrix C = certificate_matrix(model, 0, v, ph.u(), v, ph.u(), slack, 0.0);
      if (min_eig(C) < 0.0) continue;
      ++certified;
      EXPECT_GE(worst_case_snr(model, v, ph, 0), model.snr_target() - 1e-9);
      break;
    }
  }
  EXPECT_GT(certified, 0);
}

TEST(Robust, SolutionSatisfiesCertificateAndTarget) {
  const auto ch = draw(2, 2, 2, 4);
  const UncertaintyModel model{ch, {0.25, 0.25}, 1.0};
  RobustConfig cfg;
  cfg.seed = 4;
  const RobustResult r = robust_beamforming(model, cfg);
  ASSERT_NE(r.status, SolveStatus::infeasible);
  EXPECT_NEAR(r.power, r.v.squaredNorm(), 1e-12);
  for (int k = 0; k < 2; ++k) {
    EXPECT_GE(worst_case_snr(model, r.v, r.phase, k), model.snr_target() * (1.0 - 1e-6));
    const CMatrix C = certificate_matrix(model, k, r.v, r.phase.u(), r.v, r.phase.u(), r.slack[k], 0.0);
    EXPECT_GE(min_eig(C), -1e-7 * std::max(1.0, C.norm()));
  }
  for (std::size_t i = 1; i < r.power_trace.size(); ++i) EXPECT_LE(r.power_trace[i], r.power_trace[i - 1] + 1e-12);
}

TEST(Robust, PowerGrowsWithUncertainty) {
  const auto ch = draw(2, 2, 2, 5);
  RobustConfig cfg;
  cfg.seed = 5;
  const auto prof = power_profile(ch, 1.0, {0.0, 0.25, 0.5}, cfg);
  ASSERT_EQ(prof.size(), 3u);
  for (std::size_t i = 1; i < prof.size(); ++i) {
    if (prof[i].status == SolveStatus::infeasible) continue;
    ASSERT_NE(prof[i - 1].status, SolveStatus::infeasible);
    EXPECT_LE(prof[i - 1].power, prof[i].power * (1.0 + 1e-9));
  }
}

TEST(Robust, ModelValidation) {
  const auto ch = draw(2, 2, 2, 6);
  UncertaintyModel m{ch, {0.1}, 1.0};
  EXPECT_THROW(m.validate(), DimensionError);
  m.eps = {0.1, -0.1};
  EXPECT_THROW(m.validate(), DomainError);
}
