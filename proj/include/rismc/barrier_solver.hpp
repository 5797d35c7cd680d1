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

namespace rismc::barrier {

struct BarrierConfig {
  double t0 = 1.0;
  double rho = 10.0;    // barrier multiplier per outer iteration
  double alpha = 0.1;   // sufficient-decrease parameter
  double eta = 0.5;     // step shrink factor
  double delta1 = 1e-6; // outer tolerance on 1/t
  double delta2 = 1e-8; // inner tolerance on the squared direction norm
  int max_inner = 20000;
  int max_outer = 60;
  /// Number of random phase initializations; the best final capacity wins.
  int restarts = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Iterate of the barrier problem. gamma must lie strictly below every SNR.
struct BarrierState {
  TransmitCovariance Q;
  RVector theta;
  double gamma = 0.0;
  double t = 1.0;
  std::vector<double> trace;
};

/// Descent direction -grad(Gamma): dQ is Hermitian.
struct Direction {
  CMatrix dQ;
  RVector dtheta;
  double dgamma = 0.0;

  double squared_norm() const { return dQ.squaredNorm() + dtheta.squaredNorm() + dgamma * dgamma; }
};

/// Gamma = -gamma - (1/t) [sum_k log(snr_k - gamma) + log(P - Tr Q) + log det Q].
/// Throws DomainError naming the first barrier argument that is not positive.
double barrier_value(const BarrierState& s, const ChannelRealization& ch);

Direction gradients(const BarrierState& s, const ChannelRealization& ch);

/// True when every barrier argument is strictly positive.
bool is_interior(const BarrierState& s, const ChannelRealization& ch);

BarrierState step(const BarrierState& s, const Direction& d, double l);

struct BacktrackResult {
  double step = 1.0;
  bool stalled = false;
};

/// Shrinks l from 1 by eta until the stepped state is interior and
/// Gamma(x + l d) < Gamma(x) - alpha * l * |d|^2 (equality allowed at d = 0).
BacktrackResult backtrack(const BarrierState& s, const ChannelRealization& ch, const Direction& d,
                          double alpha, double eta);

struct InitialPoint {
  CMatrix Q;
  RVector theta;
};

SolveReport solve(const ChannelRealization& ch, double p_max, const BarrierConfig& cfg,
                  const std::optional<InitialPoint>& init = std::nullopt);

}  // namespace rismc::barrier
