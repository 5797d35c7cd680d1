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

#include "rismc/bounds.hpp"
#include "rismc/errors.hpp"

using namespace rismc;
using namespace rismc::bounds;

TEST(Bounds, MomentLimits) {
  // B = 0: Rayleigh links, A = N + 1. Pure LoS: A = (N + 1)^2, D = 0.
  EXPECT_NEAR(a_moment(8, RicianFactor::finite(0.0)), 9.0, 1e-12);
  EXPECT_NEAR(a_moment(8, RicianFactor::pure_los()), 81.0, 1e-12);
  EXPECT_NEAR(d_moment(8, RicianFactor::pure_los()), 0.0, 1e-12);
  // B = 1: beta = 1/2.
  const double beta = 0.5;
  const double lead = 4 * beta + std::sqrt(beta);
  const double spread = (1 - beta * beta) * 4 + 0.5;
  EXPECT_NEAR(a_moment(4, RicianFactor::finite(1.0)), lead * lead + 4 * (1 - beta * beta) + 0.5, 1e-12);
  EXPECT_NEAR(d_moment(4, RicianFactor::finite(1.0)), 4 * spread * lead * lead + 2 * spread * spread, 1e-12);
}

TEST(Bounds, CurveFormulas) {
  CurveParams p;
  p.M = 4;
  p.N = 8;
  p.K = 2;
  p.p_max = 100.0;
  const double A = a_moment(8, p.B);
  EXPECT_NEAR(bound_value(CurveKind::upper_MN, p), std::log2(1 + 100.0 * 4 * A), 1e-12);
  EXPECT_NEAR(bound_value(CurveKind::lower_MN, p), std::log2(1 + 100.0 * 4 * A / 4), 1e-12);
  EXPECT_NEAR(bound_value(CurveKind::k_decay, p), std::log2(1 + 100.0 / (8 * std::pow(2.0, 1.0 / (4 * A)))), 1e-12);
  EXPECT_NEAR(bound_value(CurveKind::km_upper, p), std::log2(1 + 100.0 * A * std::pow(1 + std::sqrt(2.0), 2)), 1e-12);
  EXPECT_LE(bound_value(CurveKind::lower_MN, p), bound_value(CurveKind::upper_MN, p));
}

TEST(Bounds, KmLowerDomain) {
  CurveParams p;
  p.M = p.K = 4;
  p.N = 4;
  p.p_max = 10.0;
  p.l = a_moment(4, p.B) + 1.0;
  EXPECT_TRUE(std::isnan(bound_value(CurveKind::km_lower, p)));
  p.l = 1.0;
  const double v = bound_value(CurveKind::km_lower, p);
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, std::log2(1 + 10.0));
}

TEST(Bounds, CurveAlongAxisAndNames) {
  CurveParams p;
  p.M = 4;
  p.K = 2;
  const AsymptoticCurve c = bound_curves(CurveKind::upper_MN, p, Axis::N, {2, 4, 8, 16});
  ASSERT_EQ(c.values.size(), 4u);
  for (std::size_t i = 1; i < c.values.size(); ++i) EXPECT_GT(c.values[i], c.values[i - 1]);
  for (auto kind : {CurveKind::upper_MN, CurveKind::lower_MN, CurveKind::k_decay, CurveKind::k_decay_statement,
                    CurveKind::km_lower, CurveKind::km_upper})
    EXPECT_EQ(curve_kind_from_string(to_string(kind)), kind);
}

TEST(Bounds, MomentsMatchFormulaAndSerialEqualsParallel) {
  const SystemDims d = SystemDims::make(4, 4, 1);
  const MomentReport a = verify_moments(d, RicianFactor::finite(1.0), 4000, 5, false);
  const MomentReport b = verify_moments(d, RicianFactor::finite(1.0), 4000, 5, true);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_TRUE(a.mean_pass) << "z=" << a.mean_z;
  EXPECT_NEAR(a.expected_mean, 4 * a_moment(4, RicianFactor::finite(1.0)), 1e-12);
}

TEST(Bounds, PureLosHasNoSpread) {
  const MomentReport r = verify_moments(SystemDims::make(2, 4, 1), RicianFactor::pure_los(), 200, 1);
  EXPECT_TRUE(r.zero_variance);
  EXPECT_NEAR(r.mean, r.expected_mean, 1e-9 * r.expected_mean);
}
