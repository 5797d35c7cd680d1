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
#include <string>

#include "rismc/alternating.hpp"
#include "rismc/model.hpp"
#include "rismc/objective.hpp"

namespace rismc::baselines {

struct GridSpec {
  int phase_levels = 360;  // theta_n in {2 pi l / L}
  /// Bloch-ball resolution for M = 2: radius and polar angle get this many
  /// levels, azimuth twice as many. Unused for M = 1 (full power is optimal).
  int cov_levels = 16;
  double budget = 1e8;  // maximum number of (theta, Q) grid points

  void validate() const;
  /// Number of (theta, Q) grid points for the given dimensions.
  double points(int M, int N) const;
};

struct BruteForceResult {
  SolveReport report;
  double evaluations = 0.0;
  /// Upper bound in bits on how far the true optimum can lie above the
  /// best grid point, from Lipschitz constants of the SNRs.
  double error_bound_bits = 0.0;
};

/// Exhaustive search over the phase grid and, for M = 2, the covariance
/// grid Q = (P/2)(I + x sx + y sy + z sz) with (x, y, z) in the unit ball.
/// Requires M <= 2 and N <= 4; beyond that, or when the grid exceeds the
/// budget, the report has status `refused` and a budget estimate.
BruteForceResult brute_force(const ChannelRealization& ch, double p_max, const GridSpec& grid,
                             bool parallel = true);

struct BeamformingConfig {
  int restarts = 4;
  int randomizations = 64;
  int max_outer = 30;
  double delta = 1e-6;
  std::uint64_t seed = 0;
  alternating::AlternatingConfig theta;  // settings for the phase step
};

struct BeamformingResult {
  CVector v;
  PhaseConfig phase;
  double rate_bits = 0.0;
  SolveReport report;
};

/// Rank-one transmission: semidefinite relaxation of the covariance step,
/// principal-eigenvector and Gaussian-randomization extraction, alternated
/// with the phase step.
BeamformingResult beamforming(const ChannelRealization& ch, double p_max, const BeamformingConfig& cfg = {});

/// Copy of `ch` with every RIS link zeroed.
ChannelRealization direct_links_only(const ChannelRealization& ch);

/// Max-min rate using only the direct links; the report is evaluated on
/// direct_links_only(ch).
SolveReport no_ris(const ChannelRealization& ch, double p_max);

}  // namespace rismc::baselines
