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
#include "rismc/rng.hpp"
#include "rismc/sdp_engine.hpp"

using namespace rismc;
using namespace rismc::sdp;

TEST(Sdp, LinearProgramVertex) {
  // min -x - 2y  s.t. x + y <= 1, x >= 0, y >= 0  -> (0, 1), value -2.
  ConicProblem p;
  p.num_vars = 2;
  p.c = RVector(2);
  p.c << -1.0, -2.0;
  p.linear.push_back({(RVector(2) << 1.0, 1.0).finished(), 1.0});
  p.linear.push_back({(RVector(2) << -1.0, 0.0).finished(), 0.0});
  p.linear.push_back({(RVector(2) << 0.0, -1.0).finished(), 0.0});
  const ConicSolution s = solve(p, Options{});
  EXPECT_EQ(s.status, Status::optimal);
  EXPECT_NEAR(s.objective, -2.0, 1e-6);
  EXPECT_LE(s.objective - (-2.0), s.gap_bound + 1e-12);
  for (std::size_t i = 1; i < s.stage_objectives.size(); ++i)
    EXPECT_LE(s.stage_objectives[i], s.stage_objectives[i - 1] + 1e-12);
}

TEST(Sdp, LargestEigenvalueOfHermitianMatrix) {
  // min t s.t. t I - A >= 0  ->  lambda_max(A).
  CounterRng rng(9);
  CMatrix B(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = rng.complex_gaussian();
  const CMatrix A = B + B.adjoint();
  ConicProblem p;
  p.num_vars = 1;
  p.c = RVector::Ones(1);
  LmiConstraint lmi;
  lmi.F0 = -A;
  for (int i = 0; i < 3; ++i) lmi.add(0, i, i, 1.0);
  p.lmis.push_back(lmi);
  const ConicSolution s = solve(p, Options{});
  Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
  EXPECT_NEAR(s.objective, es.eigenvalues().maxCoeff(), 1e-6);
}

TEST(Sdp, InfeasibleProblemIsReported) {
  ConicProblem p;
  p.num_vars = 1;
  p.c = RVector::Ones(1);
  p.linear.push_back({RVector::Ones(1), -1.0});    // x <= -1
  p.linear.push_back({-RVector::Ones(1), -1.0});   // x >= 1
  EXPECT_EQ(solve(p, Options{}).status, Status::infeasible);
}

TEST(Sdp, ValidationRejectsNonHermitianCoefficients) {
  ConicProblem p;
  p.num_vars = 1;
  p.c = RVector::Ones(1);
  LmiConstraint lmi;
  lmi.F0 = CMatrix::Identity(2, 2);
  lmi.add(0, 0, 1, Complex(1.0, 0.0));
  p.lmis.push_back(lmi);
  EXPECT_THROW(p.validate(), InvariantError);
  p.c = RVector::Ones(2);
  EXPECT_THROW(p.validate(), DimensionError);
}

TEST(HermitianBasis, RoundTripAndTraceFunctional) {
  CounterRng rng(10);
  const HermitianBasis basis(3, 2);
  CMatrix B(3, 3), R(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      B(i, j) = rng.complex_gaussian();
      R(i, j) = rng.complex_gaussian();
    }
  const CMatrix X = B + B.adjoint();
  RVector x = RVector::Zero(2 + basis.size());
  basis.from_matrix(X, x);
  EXPECT_LT((basis.to_matrix(x) - X).norm(), 1e-12);
  const CMatrix Rh = R + R.adjoint();
  EXPECT_NEAR(basis.trace_functional(Rh).dot(x.segment(basis.offset(), basis.size())), (Rh * X).trace().real(), 1e-10);
}

TEST(MaxMinQ, SingleUserIsMatchedFilter) {
  // One user: optimum p g^H g / |g|^2 with value p |g|^2.
  CRowVector g(3);
  g << Complex(1.0, 0.5), Complex(-0.3, 0.2), Complex(0.7, -1.1);
  const CMatrix R = g.adjoint() * g;
  const MaxMinResult r = maxmin_q_step({R}, 2.0);
  EXPECT_NEAR(r.gamma, 2.0 * g.squaredNorm(), 1e-6 * g.squaredNorm());
  EXPECT_LE(r.Q.Q.trace().real(), 2.0 + 1e-9);
}

TEST(MaxMinQ, OrthogonalUsersSplitPower) {
  // R_1 = e1 e1^T, R_2 = e2 e2^T: optimum splits p evenly, gamma = p / 2.
  CMatrix R1 = CMatrix::Zero(2, 2), R2 = CMatrix::Zero(2, 2);
  R1(0, 0) = 1.0;
  R2(1, 1) = 1.0;
  const MaxMinResult r = maxmin_q_step({R1, R2}, 4.0);
  EXPECT_NEAR(r.gamma, 2.0, 1e-6);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.Q.Q);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
}
