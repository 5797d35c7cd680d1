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

#include <cstdint>
#include <optional>
#include <vector>

#include "rismc/model.hpp"
#include "rismc/objective.hpp"

namespace rismc::special {

struct P3Options {
  int restarts = 32;
  /// Stationary points from the interval root finder are added as
  /// candidates when N does not exceed this.
  int krawczyk_max_N = 4;
  std::uint64_t seed = 0;
};

/// Phases maximizing the single-user channel gain |g_k0(theta)|^2.
struct P3Result {
  PhaseConfig phase;
  double gain = 0.0;        // |g_k0|^2 at the returned phases
  double residual = 0.0;    // |grad| / gain at the returned phases
  bool degenerate = false;  // gain does not depend on theta
};

P3Result solve_p3(const ChannelRealization& ch, int k0, const P3Options& opt = {});

/// Single-antenna closed form theta_n = -(arg h_n + arg H_n1 + arg t) (M = 1).
RVector single_antenna_phases(const ChannelRealization& ch, int k0);

struct MisoResult {
  double capacity_bits = 0.0;
  TransmitCovariance Q;
  bool degenerate = false;  // zero effective channel
};

/// Capacity log2(1 + p_max |g|^2) and the rank-one covariance
/// p_max g^H g / |g|^2 for the effective channel of user k0.
MisoResult miso_capacity_and_q(const PhaseConfig& phase, const ChannelRealization& ch, int k0, double p_max);

struct SpecialCaseResult {
  int k0 = 0;
  PhaseConfig phase;
  TransmitCovariance Q;
  double capacity_bits = 0.0;
  std::vector<double> margins;  // R_k - R_k0 per user
  bool degenerate = false;
};

/// Candidate dominant users, weakest aggregate channel first.
std::vector<int> candidate_order(const ChannelRealization& ch);

/// Tries each candidate k0: solves the single-user problem for it and
/// accepts it when every other user's rate is at least as high.
std::optional<SpecialCaseResult> detect_and_solve(const ChannelRealization& ch, double p_max,
                                                  const P3Options& opt = {});

/// Runs detect_and_solve and packages the outcome as a SolveReport; the
/// status is `skipped` when the special case does not apply.
SolveReport solve(const ChannelRealization& ch, double p_max, const P3Options& opt = {});

}  // namespace rismc::special
