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

#include "rismc/interval.hpp"
#include "rismc/krawczyk.hpp"
#include "rismc/rng.hpp"

using namespace rismc;

TEST(Interval, EnclosesPointEvaluations) {
  // Property: f(x) lies in F(X) for x sampled in X.
  CounterRng rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    const double lo = -4.0 + 8.0 * rng.uniform();
    const double hi = lo + 3.0 * rng.uniform();
    const Interval X(lo, hi);
    const Interval F = sin(X) * cos(X) + X * X - Interval(0.5);
    for (int s = 0; s < 20; ++s) {
      const double x = lo + (hi - lo) * rng.uniform();
      EXPECT_TRUE(F.contains(std::sin(x) * std::cos(x) + x * x - 0.5));
    }
  }
}

TEST(Interval, SinCosExtremaAreCaptured) {
  const Interval s = sin(Interval(1.0, 2.0));
  EXPECT_GE(s.hi(), 1.0);
  const Interval c = cos(Interval(3.0, 3.3));
  EXPECT_LE(c.lo(), -1.0);
  Interval out;
  EXPECT_FALSE(intersect(Interval(0.0, 1.0), Interval(2.0, 3.0), out));
  EXPECT_TRUE(intersect(Interval(0.0, 2.5), Interval(2.0, 3.0), out));
  EXPECT_DOUBLE_EQ(out.lo(), 2.0);
}

TEST(Krawczyk, SingleVariableRootsAreAllFound) {
  // r(theta) = c sin(theta + omega) has roots -omega and pi - omega.
  TrigSystem sys;
  sys.b = RMatrix::Zero(1, 1);
  sys.psi = RMatrix::Zero(1, 1);
  sys.c = RVector::Constant(1, 2.0);
  sys.omega = RVector::Constant(1, 0.4);
  const KrawczykResult r = krawczyk_solve(sys);
  ASSERT_EQ(r.roots.size(), 2u);
  for (const RVector& root : r.roots) EXPECT_NEAR(sys.residual(root)(0), 0.0, 1e-9);
}

TEST(Krawczyk, TwoVariableSystemMatchesGridScan) {
  CounterRng rng(3);
  TrigSystem sys;
  sys.b = RMatrix::Zero(2, 2);
  sys.psi = RMatrix::Zero(2, 2);
  sys.b(0, 1) = sys.b(1, 0) = 0.8;
  sys.psi(0, 1) = 0.3;
  sys.psi(1, 0) = -0.3;
  sys.c = (RVector(2) << 1.0, 1.5).finished();
  sys.omega = (RVector(2) << 0.2, -1.1).finished();
  const KrawczykResult r = krawczyk_solve(sys);
  EXPECT_FALSE(r.partial);
  for (const RVector& root : r.roots) EXPECT_LT(sys.residual(root).norm(), 1e-8);
  // Every grid point with a near-zero residual lies next to a reported root.
  const int L = 400;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      RVector th(2);
      th << kTwoPi * i / L, kTwoPi * j / L;
      if (sys.residual(th).norm() > 1e-3) continue;
      double best = 1e9;
      for (const RVector& root : r.roots) {
        double d = 0.0;
        for (int n = 0; n < 2; ++n) {
          const double a = std::fabs(root(n) - th(n));
          d = std::max(d, std::min(a, kTwoPi - a));
        }
        best = std::min(best, d);
      }
      EXPECT_LT(best, 0.05);
    }
}

TEST(Krawczyk, ZeroSystemIsDegenerate) {
  TrigSystem sys;
  sys.b = RMatrix::Zero(2, 2);
  sys.psi = RMatrix::Zero(2, 2);
  sys.c = RVector::Zero(2);
  sys.omega = RVector::Zero(2);
  EXPECT_TRUE(krawczyk_solve(sys).degenerate);
}
