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

#include <vector>

#include "rismc/interval.hpp"
#include "rismc/types.hpp"

namespace rismc {

/// Stationarity system
///   r_n(theta) = sum_{j != n} b_nj sin(theta_n - theta_j + psi_nj) + c_n sin(theta_n + omega_n)
/// with b symmetric and psi antisymmetric.
struct TrigSystem {
  RMatrix b;
  RMatrix psi;
  RVector c;
  RVector omega;

  int N() const { return static_cast<int>(c.size()); }
  double scale() const;  // largest coefficient magnitude
  bool is_zero() const { return scale() == 0.0; }
  /// True when the direct terms vanish, so that the system is invariant
  /// under a common phase offset.
  bool is_shift_invariant() const;

  RVector residual(const RVector& theta) const;
  RMatrix jacobian(const RVector& theta) const;
  IntervalVector residual(const IntervalVector& theta) const;
  std::vector<IntervalVector> jacobian(const IntervalVector& theta) const;
};

struct KrawczykOptions {
  double lo = -0.1;
  double hi = kTwoPi + 0.1;
  int max_boxes = 200000;
  double residual_tol = 1e-8;  // on the system scaled to unit largest coefficient
};

struct KrawczykResult {
  std::vector<RVector> roots;  // wrapped to [0, 2 pi), deduplicated
  bool partial = false;        // box budget exhausted
  bool degenerate = false;     // zero system: every point is a root
  bool gauge_fixed = false;    // theta_0 pinned to 0 for a shift-invariant system
  int boxes = 0;
  int uncertified = 0;         // tiny boxes left without a uniqueness proof
};

/// Encloses every root in the box [lo, hi]^N by Krawczyk contraction and
/// bisection. A box whose Krawczyk image lies in its interior holds exactly
/// one root, which is then refined by Newton's method.
KrawczykResult krawczyk_solve(const TrigSystem& system, const KrawczykOptions& options = {});

}  // namespace rismc
