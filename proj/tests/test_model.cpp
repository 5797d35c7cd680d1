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
#include "rismc/model.hpp"
#include "rismc/rng.hpp"

using namespace rismc;

TEST(SystemDims, PicksSquareFactorizations) {
  const SystemDims d = SystemDims::make(8, 16, 3);
  EXPECT_EQ(d.M1 * d.M2, 8);
  EXPECT_EQ(d.N1 * d.N2, 16);
  EXPECT_EQ(d.N1, 4);
  EXPECT_THROW(SystemDims::make(0, 4, 1), DomainError);
}

TEST(RicianFactor, Fractions) {
  const RicianFactor b = RicianFactor::finite(3.0);
  EXPECT_DOUBLE_EQ(b.los_fraction(), 0.75);
  EXPECT_DOUBLE_EQ(b.nlos_fraction(), 0.25);
  EXPECT_DOUBLE_EQ(RicianFactor::pure_los().los_fraction(), 1.0);
  EXPECT_DOUBLE_EQ(RicianFactor::pure_los().nlos_fraction(), 0.0);
  EXPECT_THROW(RicianFactor::finite(-1.0), DomainError);
  EXPECT_THROW(RicianFactor::finite(INFINITY), DomainError);
}

TEST(UraResponse, UnitModulusAndColumnStacking) {
  const double omega = 0.7, vt = 1.3, d = 0.5;
  const CVector a = ura_response(3, 2, omega, vt, d);
  ASSERT_EQ(a.size(), 6);
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 2; ++l) {
      const double phase = kTwoPi * d * std::sin(omega) * (i * std::cos(vt) - l * std::sin(vt));
      EXPECT_NEAR(std::abs(a(i + 3 * l) - std::polar(1.0, phase)), 0.0, 1e-12);
    }
}

TEST(Pathloss, Formula) {
  EXPECT_NEAR(pathloss_gain(10.0), std::pow(10.0, -3.75) / std::pow(10.0, 3.76), 1e-20);
  EXPECT_THROW(pathloss_gain(0.0), DomainError);
}

TEST(SampleChannels, ShapesAndCascade) {
  RicianParams p;
  p.seed = 5;
  const ChannelRealization ch = sample_channels(SystemDims::make(4, 6, 3), p);
  EXPECT_EQ(ch.M(), 4);
  EXPECT_EQ(ch.N(), 6);
  EXPECT_EQ(ch.K(), 3);
  for (int k = 0; k < 3; ++k)
    EXPECT_LT((ch.cascade[k] - ch.h[k].asDiagonal() * ch.H).norm(), 1e-14);
}

TEST(SampleChannels, SeedDeterminism) {
  RicianParams p;
  p.seed = 99;
  const auto a = sample_channels(SystemDims::make(2, 4, 2), p);
  const auto b = sample_channels(SystemDims::make(2, 4, 2), p);
  EXPECT_EQ((a.H - b.H).norm(), 0.0);
  p.seed = 100;
  const auto c = sample_channels(SystemDims::make(2, 4, 2), p);
  EXPECT_GT((a.H - c.H).norm(), 0.0);
}

TEST(SampleChannels, PureLosHasUnitModulusEntries) {
  RicianParams p;
  p.B = RicianFactor::pure_los();
  p.seed = 3;
  const auto ch = sample_channels(SystemDims::make(4, 4, 2), p);
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(std::abs(ch.H(n, m)), 1.0, 1e-12);
}

TEST(SampleChannels, NlosPowerIsUnitOnAverage) {
  // Property: each entry has unit mean power whatever the Rician factor.
  for (double B : {0.0, 2.0}) {
    double acc = 0.0;
    int count = 0;
    for (std::uint64_t s = 0; s < 400; ++s) {
      RicianParams p;
      p.B = RicianFactor::finite(B);
      p.seed = s;
      const auto ch = sample_channels(SystemDims::make(2, 2, 1), p);
      acc += ch.H.squaredNorm();
      count += 4;
    }
    EXPECT_NEAR(acc / count, 1.0, 0.08) << "B=" << B;
  }
}

TEST(ChannelRealization, FromLinksChecksShapes) {
  CMatrix H = CMatrix::Ones(3, 2);
  EXPECT_THROW(ChannelRealization::from_links(H, {CVector::Ones(2)}, {CVector::Ones(2)}), DimensionError);
  EXPECT_THROW(ChannelRealization::from_links(H, {CVector::Ones(3)}, {CVector::Ones(3)}), DimensionError);
  const auto ch = ChannelRealization::from_links(H, {CVector::Ones(3), 2.0 * CVector::Ones(3)},
                                                 {CVector::Ones(2), CVector::Zero(2)});
  const auto one = ch.select_users({1});
  EXPECT_EQ(one.K(), 1);
  EXPECT_NEAR(one.h[0](0).real(), 2.0, 0.0);
  EXPECT_THROW(ch.select_users({2}), DomainError);
}

TEST(CounterRng, SubstreamsAreReproducible) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  const CounterRng s1 = CounterRng(42).substream(3), s2 = CounterRng(42).substream(3);
  EXPECT_EQ(CounterRng(s1)(), CounterRng(s2)());
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}
