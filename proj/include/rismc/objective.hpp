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
#include <vector>

#include "rismc/model.hpp"
#include "rismc/types.hpp"

namespace rismc {

/// RIS phases. u_n = exp(j*theta_n) is the reflection coefficient of
/// element n; the user sees sum_n u_n * cascade_k(n, :) + t_k^H.
class PhaseConfig {
 public:
  PhaseConfig() = default;
  explicit PhaseConfig(const RVector& theta);
  static PhaseConfig zeros(int N) { return PhaseConfig(RVector::Zero(N)); }

  const RVector& theta() const { return theta_; }
  const CVector& u() const { return u_; }
  int N() const { return static_cast<int>(theta_.size()); }

 private:
  RVector theta_;
  CVector u_;
};

/// Transmit covariance with its power budget.
struct TransmitCovariance {
  CMatrix Q;
  double p_max = 1.0;

  static TransmitCovariance scaled_identity(int M, double p_max, double fraction = 1.0);
  int M() const { return static_cast<int>(Q.rows()); }
  /// Throws InvariantError if Q is not Hermitian, not PSD or over budget.
  void validate() const;
};

/// Cosine expansion of one user's SNR as a function of theta:
/// snr = a + sum_{i<j} 2 b_ij cos(theta_i - theta_j + psi_ij)
///         + sum_i 2 c_i cos(theta_i + omega_i).
struct TrigExpansion {
  double a = 0.0;
  RMatrix b;    // N x N, strictly upper triangle used
  RMatrix psi;  // N x N, strictly upper triangle used
  RVector c;
  RVector omega;

  int N() const { return static_cast<int>(c.size()); }
  double evaluate(const RVector& theta) const;
};

/// Effective row channel g_k = sum_n u_n * cascade_k(n, :) + t_k^H (1 x M).
CRowVector effective_channel(const PhaseConfig& phase, const ChannelRealization& ch, int k);

double snr(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k);
double snr(const TransmitCovariance& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k);
double rate(const TransmitCovariance& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k);

struct MinRate {
  double value = 0.0;
  int argmin = 0;
};
MinRate min_rate(const TransmitCovariance& Q, const PhaseConfig& phase, const ChannelRealization& ch);
/// Minimum SNR over users, same tie-break as min_rate.
double min_snr(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch);
std::vector<double> all_snrs(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch);

TrigExpansion trig_expansion(const TransmitCovariance& Q, const ChannelRealization& ch, int k);

/// d snr_k / d theta (length N).
RVector snr_theta_gradient(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k);
/// d^2 snr_k / d theta^2 (N x N, symmetric).
RMatrix snr_theta_hessian(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k);

/// R_k = g_k^H g_k, so that snr_k = Tr(R_k Q).
CMatrix user_gram(const PhaseConfig& phase, const ChannelRealization& ch, int k);

enum class SolveStatus { converged, max_iterations, stalled, infeasible, degenerate, skipped, refused };
std::string to_string(SolveStatus s);

/// Result of any capacity solver.
struct SolveReport {
  std::string method;
  TransmitCovariance Q;
  PhaseConfig phase;
  std::vector<double> snrs;
  std::vector<double> rates;
  double gamma = 0.0;  // min_k snr
  double capacity_bits = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
  /// Method-specific monotone trace (gamma per outer iteration for
  /// alternating, barrier objective per accepted step for the barrier solver).
  std::vector<double> trace;
  /// Offsets into `trace` where a new monotone segment starts.
  std::vector<int> trace_breaks;
  int init_index = -1;
  std::vector<std::string> warnings;

  /// Recomputes snrs, rates, gamma and capacity from (Q, phase).
  void evaluate(const ChannelRealization& ch);
};

}  // namespace rismc
