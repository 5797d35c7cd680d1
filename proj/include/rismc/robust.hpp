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

#include "rismc/baselines.hpp"
#include "rismc/model.hpp"
#include "rismc/objective.hpp"
#include "rismc/sdp_engine.hpp"

namespace rismc::baselines {

/// Estimated channels plus Frobenius-ball radii on the cascade errors.
/// The estimate's cascades play the role of the estimated cascades; its
/// direct links are taken as exact.
struct UncertaintyModel {
  ChannelRealization estimate;
  std::vector<double> eps;  // one radius per user
  double target_rate_bits = 1.0;

  void validate() const;
  double snr_target() const { return std::exp2(target_rate_bits) - 1.0; }
};

struct RobustConfig {
  double iota0 = 1.0;   // initial unit-modulus penalty
  double eta = 3.0;     // penalty multiplier per inner iteration
  double iota_max = 1e6;
  double delta1 = 1e-6;  // outer stop on | ||v_i|| - ||v_{i-1}|| |
  double delta2 = 1e-6;  // inner stop on ||u_j - u_{j-1}||
  int max_outer = 30;
  int max_inner = 20;
  int max_dim = 4;  // guard on M and N
  std::uint64_t seed = 0;
  BeamformingConfig init;  // perfect-CSI beamformer used as the starting point
  sdp::Options sdp;
};

struct RobustResult {
  CVector v;
  PhaseConfig phase;
  double power = 0.0;  // ||v||^2
  SolveStatus status = SolveStatus::infeasible;
  int iterations = 0;
  std::vector<double> slack;        // S-procedure multipliers, one per user
  std::vector<double> power_trace;  // ||v||^2 after each accepted outer step
};

/// Worst-case SNR of user k over the error ball, in closed form:
/// (max(0, |s_k| - eps_k ||v|| ||u||))^2 with s_k the nominal signal.
double worst_case_snr(const UncertaintyModel& model, const CVector& v, const PhaseConfig& phase, int k);

/// Nominal signal (u^T C_k + t_k^H) v + u^T dC v for a cascade error dC.
Complex perturbed_signal(const UncertaintyModel& model, const CVector& v, const PhaseConfig& phase, int k,
                         const CMatrix& dC);

/// Hermitian matrix of the S-procedure certificate for user k, linearized
/// around (v_ref, u_ref):
///   [ A + w I          l                         ]
///   [ l^H              phi - target - margin - w eps^2 ]
/// where the quadratic form in vec(dC) lower-bounds |signal|^2 for every
/// error. For eps_k = 0 only the bottom-right entry is returned.
CMatrix certificate_matrix(const UncertaintyModel& model, int k, const CVector& v, const CVector& u,
                           const CVector& v_ref, const CVector& u_ref, double slack, double margin);

/// Minimizes ||v||^2 subject to the worst-case rate target by alternating a
/// convex transmit step with a penalized phase step. `warm`, when given and
/// feasible, replaces the beamforming start.
RobustResult robust_beamforming(const UncertaintyModel& model, const RobustConfig& cfg = {},
                                const RobustResult* warm = nullptr);

/// Required power for each radius (applied to every user). Radii are solved
/// from largest to smallest, each warm-started from the previous one and
/// from the cold start, keeping the lower power.
std::vector<RobustResult> power_profile(const ChannelRealization& estimate, double target_rate_bits,
                                        const std::vector<double>& eps_values, const RobustConfig& cfg = {});

}  // namespace rismc::baselines
