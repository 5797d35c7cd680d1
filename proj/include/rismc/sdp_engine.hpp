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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rismc/objective.hpp"
#include "rismc/types.hpp"

namespace rismc::sdp {

/// a^T x <= b.
struct LinearConstraint {
  RVector a;
  double b = 0.0;
};

/// One nonzero of the coefficient matrix multiplying variable `var`.
struct LmiTerm {
  int var = 0;
  int row = 0;
  int col = 0;
  Complex value;
};

/// F0 + sum_i x_i F_i >= 0 (Hermitian). The F_i are given as sparse terms;
/// callers add both (r, c) and (c, r) entries for off-diagonal positions.
struct LmiConstraint {
  CMatrix F0;
  std::vector<LmiTerm> terms;

  int size() const { return static_cast<int>(F0.rows()); }
  void add(int var, int row, int col, Complex value) { terms.push_back({var, row, col, value}); }
  /// Adds value at (row, col) and conj(value) at (col, row).
  void add_hermitian(int var, int row, int col, Complex value);
  CMatrix evaluate(const RVector& x) const;
};

/// minimize c^T x subject to linear inequalities and LMIs.
struct ConicProblem {
  int num_vars = 0;
  RVector c;
  std::vector<LinearConstraint> linear;
  std::vector<LmiConstraint> lmis;
  /// Optional strictly feasible starting point; phase I runs otherwise.
  RVector x0;

  void validate() const;
  /// Total barrier degree: number of linear rows plus LMI sizes.
  int barrier_degree() const;
  bool strictly_feasible(const RVector& x) const;
};

enum class Status { optimal, max_iterations, infeasible };
std::string to_string(Status s);

struct ConicSolution {
  RVector x;
  double objective = 0.0;
  double barrier_param = 0.0;  // 1/t at exit
  double gap_bound = 0.0;      // barrier_degree / t
  int iterations = 0;          // Newton steps, both phases
  Status status = Status::max_iterations;
  /// c^T x at the end of each centering stage; non-increasing.
  std::vector<double> stage_objectives;
};

struct Options {
  double tol = 1e-8;  // stop once 1/t <= tol
  int max_iters = 2000;
  double t0 = 1.0;
  double mu = 10.0;
  /// Box |x_i| <= box applied only during phase I.
  double phase1_box = 1e4;
};

ConicSolution solve(const ConicProblem& problem, const Options& options);
ConicSolution solve(const ConicProblem& problem, double tol, int max_iters);

/// Real coordinates of an r x r Hermitian matrix: r diagonal entries, then
/// for each i < j the real and imaginary parts of entry (i, j).
class HermitianBasis {
 public:
  explicit HermitianBasis(int r, int offset = 0) : r_(r), offset_(offset) {}
  int size() const { return r_ * r_; }
  int dim() const { return r_; }
  int offset() const { return offset_; }

  CMatrix to_matrix(const RVector& x) const;
  /// Writes the coordinates of Hermitian X into x at the basis offset.
  void from_matrix(const CMatrix& X, RVector& x) const;
  /// Coefficient row of the linear functional X -> Re Tr(R X).
  RVector trace_functional(const CMatrix& R) const;
  /// Adds the variable block X (times `scale`) at position (r0, r0) of an LMI.
  void add_to_lmi(LmiConstraint& lmi, int r0, double scale = 1.0) const;

 private:
  int r_;
  int offset_;
};

/// maximize gamma s.t. gamma <= Tr(R_k Q), Tr(Q) <= p_max, Q >= 0.
struct MaxMinResult {
  TransmitCovariance Q;
  double gamma = 0.0;
  ConicSolution solution;
};
MaxMinResult maxmin_q_step(const std::vector<CMatrix>& R_list, double p_max, const Options& options = {});

}  // namespace rismc::sdp
