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
#include <vector>

#include "rismc/krawczyk.hpp"
#include "rismc/model.hpp"
#include "rismc/objective.hpp"
#include "rismc/sdp_engine.hpp"

namespace rismc::alternating {

enum class ThetaMethod { krawczyk, multistart, automatic };

struct AlternatingConfig {
  int J = 16;            // random phase initializations
  double delta = 1e-6;   // stop when |gamma_i - gamma_{i-1}| <= delta * max(1, gamma_i)
  int max_outer = 100;
  ThetaMethod theta_method = ThetaMethod::automatic;
  int krawczyk_max_N = 2;  // enclosure cost grows steeply beyond two elements
  int krawczyk_max_boxes = 200000;
  int multistart_restarts = 8;
  int polish_candidates = 2;
  int polish_max_lps = 60;  // linear programs per local refinement
  std::uint64_t seed = 0;
  /// Additional starting phases tried after the random ones.
  std::vector<RVector> extra_inits;
  sdp::Options sdp;

  void validate() const;
  bool use_krawczyk(int N) const;
};

struct QStep {
  TransmitCovariance Q;
  double gamma = 0.0;
};

/// Covariance step: maximize min_k Tr(R_k Q) over the power budget with
/// R_k = g_k^H g_k built from the current phases.
QStep q_step(const PhaseConfig& phase, const ChannelRealization& ch, double p_max, const sdp::Options& opt = {});

/// Stationarity system of sum_k lambda_k snr_k(theta) for fixed Q. The
/// aggregated pair (b_bar, psi_bar) is the phasor sum of the per-user terms.
struct KktSystem {
  std::vector<TrigExpansion> per_user;
  RVector lambda;
  TrigSystem system;

  /// Equals minus the theta-gradient of sum_k lambda_k snr_k.
  RVector residual(const RVector& theta) const { return system.residual(theta); }
};

KktSystem build_kkt(const TransmitCovariance& Q, const ChannelRealization& ch, const RVector& lambda);

struct ThetaStep {
  PhaseConfig phase;
  double gamma = 0.0;
  int candidates = 0;
  bool partial = false;     // a root enclosure ran out of boxes
  bool degenerate = false;  // a stationarity system was identically zero
};

/// Phase step for fixed Q. Never returns a worse min-SNR than theta_init.
ThetaStep theta_step(const TransmitCovariance& Q, const ChannelRealization& ch, const RVector& theta_init,
                     const AlternatingConfig& cfg, std::uint64_t seed = 0);

/// Local max-min refinement by trust-region successive linear programming.
RVector polish_maxmin(const CMatrix& Q, const ChannelRealization& ch, const RVector& theta, int max_lps = 60);

/// Norm of the best simplex combination of active-user gradients, divided by
/// the minimum SNR. Zero at a first-order stationary point of min_k snr_k.
double kkt_residual(const CMatrix& Q, const ChannelRealization& ch, const RVector& theta, double active_tol = 1e-6);

SolveReport solve(const ChannelRealization& ch, double p_max, const AlternatingConfig& cfg);

}  // namespace rismc::alternating
