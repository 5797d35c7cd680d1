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

#include "rismc/errors.hpp"
#include "rismc/model.hpp"
#include "rismc/objective.hpp"
#include "rismc/rng.hpp"

using namespace rismc;

namespace {

ChannelRealization draw(int M, int N, int K, std::uint64_t seed) {
  RicianParams p;
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

CMatrix random_psd(int M, CounterRng& rng) {
  CMatrix A(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) A(i, j) = rng.complex_gaussian();
  CMatrix Q = A * A.adjoint();
  return Q / Q.trace().real();
}

// Independent oracle: explicit sum over reflected terms.
double snr_oracle(const CMatrix& Q, const RVector& theta, const ChannelRealization& ch, int k) {
  CRowVector g = ch.t[k].adjoint();
  for (int n = 0; n < ch.N(); ++n) g += std::polar(1.0, theta(n)) * ch.h[k](n) * ch.H.row(n);
  return (g * Q * g.adjoint())(0, 0).real();
}

}  // namespace

TEST(Objective, SnrMatchesExplicitSum) {
  CounterRng rng(1);
  for (int inst = 0; inst < 10; ++inst) {
    const auto ch = draw(3, 4, 2, inst);
    const CMatrix Q = random_psd(3, rng);
    RVector th(4);
    for (int n = 0; n < 4; ++n) th(n) = rng.uniform_angle();
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(snr(Q, PhaseConfig(th), ch, k), snr_oracle(Q, th, ch, k), 1e-12);
  }
}

TEST(Objective, TrigExpansionMatchesOracle) {
  CounterRng rng(2);
  for (int inst = 0; inst < 20; ++inst) {
    const int M = 1 + inst % 3, N = 1 + inst % 4;
    const auto ch = draw(M, N, 1, 100 + inst);
    const TransmitCovariance Q{random_psd(M, rng), 1.0};
    const TrigExpansion te = trig_expansion(Q, ch, 0);
    for (int rep = 0; rep < 20; ++rep) {
      RVector th(N);
      for (int n = 0; n < N; ++n) th(n) = rng.uniform_angle();
      const double ref = snr_oracle(Q.Q, th, ch, 0);
      EXPECT_NEAR(te.evaluate(th), ref, 1e-10 * std::max(1.0, ref));
    }
  }
}

TEST(Objective, TrigExpansionConstantTermIsPhaseAverage) {
  // Property: averaging over independent uniform phases kills every cosine.
  CounterRng rng(3);
  const auto ch = draw(2, 3, 1, 7);
  const TransmitCovariance Q{random_psd(2, rng), 1.0};
  const TrigExpansion te = trig_expansion(Q, ch, 0);
  const int L = 8;
  double avg = 0.0;
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b)
      for (int c = 0; c < L; ++c) {
        RVector th(3);
        th << kTwoPi * a / L, kTwoPi * b / L, kTwoPi * c / L;
        avg += te.evaluate(th);
      }
  EXPECT_NEAR(avg / (L * L * L), te.a, 1e-10);
}

TEST(Objective, ThetaGradientAndHessianMatchFiniteDifferences) {
  CounterRng rng(4);
  const auto ch = draw(3, 4, 2, 11);
  const CMatrix Q = random_psd(3, rng);
  RVector th(4);
  for (int n = 0; n < 4; ++n) th(n) = rng.uniform_angle();
  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    const RVector g = snr_theta_gradient(Q, PhaseConfig(th), ch, k);
    const RMatrix Hs = snr_theta_hessian(Q, PhaseConfig(th), ch, k);
    for (int n = 0; n < 4; ++n) {
      RVector a = th, b = th;
      a(n) += h;
      b(n) -= h;
      EXPECT_NEAR(g(n), (snr_oracle(Q, a, ch, k) - snr_oracle(Q, b, ch, k)) / (2 * h), 1e-6);
      const RVector ga = snr_theta_gradient(Q, PhaseConfig(a), ch, k);
      const RVector gb = snr_theta_gradient(Q, PhaseConfig(b), ch, k);
      for (int m = 0; m < 4; ++m) EXPECT_NEAR(Hs(m, n), (ga(m) - gb(m)) / (2 * h), 1e-5);
    }
  }
}

TEST(Objective, UserGramGivesSnrAsTrace) {
  CounterRng rng(5);
  const auto ch = draw(2, 2, 2, 12);
  const CMatrix Q = random_psd(2, rng);
  const PhaseConfig ph(RVector::Constant(2, 0.3));
  EXPECT_NEAR((user_gram(ph, ch, 1) * Q).trace().real(), snr(Q, ph, ch, 1), 1e-12);
}

TEST(Objective, MinRateTieBreaksOnLowestIndex) {
  const CMatrix H = CMatrix::Zero(1, 1);
  const auto ch = ChannelRealization::from_links(H, {CVector::Zero(1), CVector::Zero(1)},
                                                 {CVector::Ones(1), CVector::Ones(1)});
  const TransmitCovariance Q = TransmitCovariance::scaled_identity(1, 1.0);
  const MinRate r = min_rate(Q, PhaseConfig::zeros(1), ch);
  EXPECT_EQ(r.argmin, 0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Objective, CovarianceValidation) {
  TransmitCovariance Q{CMatrix::Identity(2, 2), 1.0};
  EXPECT_THROW(Q.validate(), InvariantError);
  Q.p_max = 2.0;
  EXPECT_NO_THROW(Q.validate());
  Q.Q(0, 1) = 1.0;
  EXPECT_THROW(Q.validate(), InvariantError);
}

TEST(Objective, DimensionChecks) {
  const auto ch = draw(2, 3, 1, 1);
  EXPECT_THROW(snr(CMatrix::Identity(3, 3), PhaseConfig::zeros(3), ch, 0), DimensionError);
  EXPECT_THROW(snr(CMatrix::Identity(2, 2), PhaseConfig::zeros(2), ch, 0), DimensionError);
}
