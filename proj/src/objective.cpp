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

#include "rismc/objective.hpp"

#include <algorithm>

#include "rismc/errors.hpp"

namespace rismc {

namespace {

void check_dims(int Qdim, const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  if (k < 0 || k >= ch.K()) throw DimensionError("user index out of range");
  if (phase.N() != ch.N()) throw DimensionError("phase length must equal N");
  if (Qdim != ch.M()) throw DimensionError("Q size must equal M");
}

}  // namespace

PhaseConfig::PhaseConfig(const RVector& theta) : theta_(theta), u_(theta.size()) {
  for (Eigen::Index n = 0; n < theta_.size(); ++n) {
    theta_(n) = wrap_angle(theta_(n));
    u_(n) = unit_phasor(theta_(n));
  }
}

TransmitCovariance TransmitCovariance::scaled_identity(int M, double p_max, double fraction) {
  return {CMatrix::Identity(M, M) * Complex(p_max * fraction / M, 0.0), p_max};
}

void TransmitCovariance::validate() const {
  if (!(p_max > 0.0)) throw InvariantError("p_max must be > 0");
  if (Q.rows() != Q.cols()) throw InvariantError("Q must be square");
  const double scale = std::max(1.0, Q.norm());
  if ((Q - Q.adjoint()).norm() > 1e-10 * scale) throw InvariantError("Q is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Q, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * scale) throw InvariantError("Q is not PSD");
  if (Q.trace().real() > p_max + 1e-9 * std::max(1.0, p_max)) throw InvariantError("Tr(Q) exceeds p_max");
}

double TrigExpansion::evaluate(const RVector& theta) const {
  const int n = N();
  double s = a;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s += 2.0 * b(i, j) * std::cos(theta(i) - theta(j) + psi(i, j));
    s += 2.0 * c(i) * std::cos(theta(i) + omega(i));
  }
  return s;
}

CRowVector effective_channel(const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  check_dims(ch.M(), phase, ch, k);
  return phase.u().transpose() * ch.cascade[k] + ch.t[k].adjoint();
}

double snr(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  check_dims(static_cast<int>(Q.rows()), phase, ch, k);
  const CRowVector g = effective_channel(phase, ch, k);
  const double v = (g * Q * g.adjoint())(0, 0).real();
  return v < 0.0 ? 0.0 : v;
}

double snr(const TransmitCovariance& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  return snr(Q.Q, phase, ch, k);
}

double rate(const TransmitCovariance& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  return bits(snr(Q, phase, ch, k));
}

std::vector<double> all_snrs(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch) {
  std::vector<double> out(ch.K());
  for (int k = 0; k < ch.K(); ++k) out[k] = snr(Q, phase, ch, k);
  return out;
}

MinRate min_rate(const TransmitCovariance& Q, const PhaseConfig& phase, const ChannelRealization& ch) {
  MinRate best{bits(snr(Q, phase, ch, 0)), 0};
  for (int k = 1; k < ch.K(); ++k) {
    const double r = bits(snr(Q, phase, ch, k));
    if (r < best.value) best = {r, k};
  }
  return best;
}

double min_snr(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch) {
  double best = snr(Q, phase, ch, 0);
  for (int k = 1; k < ch.K(); ++k) best = std::min(best, snr(Q, phase, ch, k));
  return best;
}

TrigExpansion trig_expansion(const TransmitCovariance& Q, const ChannelRealization& ch, int k) {
  if (k < 0 || k >= ch.K()) throw DimensionError("user index out of range");
  if (Q.M() != ch.M()) throw DimensionError("Q size must equal M");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Q.Q);
  RVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-6) throw InvariantError("trig_expansion: Q has a negative eigenvalue");
    ev(i) = ev(i) < 1e-12 ? 0.0 : std::sqrt(ev(i));
  }
  // Row n of V is v_n^H; p_k^H = t_k^H U Sigma^{1/2}.
  const CMatrix V = ch.H * es.eigenvectors() * ev.asDiagonal();
  const CVector p = ev.asDiagonal() * (es.eigenvectors().adjoint() * ch.t[k]);
  const CVector& h = ch.h[k];
  const int N = ch.N();

  TrigExpansion te;
  te.b = RMatrix::Zero(N, N);
  te.psi = RMatrix::Zero(N, N);
  te.c = RVector::Zero(N);
  te.omega = RVector::Zero(N);
  te.a = p.squaredNorm();
  for (int i = 0; i < N; ++i) {
    te.a += std::norm(h(i)) * V.row(i).squaredNorm();
    for (int j = i + 1; j < N; ++j) {
      const Complex z = h(i) * std::conj(h(j)) * V.row(j).dot(V.row(i));
      te.b(i, j) = std::abs(z);
      te.psi(i, j) = std::arg(z);
    }
    const Complex w = h(i) * (V.row(i) * p)(0, 0);
    te.c(i) = std::abs(w);
    te.omega(i) = std::arg(w);
  }
  return te;
}

RVector snr_theta_gradient(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  check_dims(static_cast<int>(Q.rows()), phase, ch, k);
  const CVector w = Q * effective_channel(phase, ch, k).adjoint();
  const CVector cw = ch.cascade[k] * w;
  RVector g(ch.N());
  // d/dtheta_n 2Re(...) of (j u_n cascade_n) Q g^H.
  for (int n = 0; n < ch.N(); ++n) g(n) = -2.0 * (phase.u()(n) * cw(n)).imag();
  return g;
}

RMatrix snr_theta_hessian(const CMatrix& Q, const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  check_dims(static_cast<int>(Q.rows()), phase, ch, k);
  const CVector w = Q * effective_channel(phase, ch, k).adjoint();
  const CVector cw = ch.cascade[k] * w;
  const CMatrix D = phase.u().asDiagonal() * ch.cascade[k];  // rows u_n cascade_n
  const CMatrix C = D * Q * D.adjoint();
  RMatrix Hs = 2.0 * C.real();
  for (int n = 0; n < ch.N(); ++n) Hs(n, n) -= 2.0 * (phase.u()(n) * cw(n)).real();
  return Hs;
}

CMatrix user_gram(const PhaseConfig& phase, const ChannelRealization& ch, int k) {
  const CRowVector g = effective_channel(phase, ch, k);
  return g.adjoint() * g;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::degenerate: return "degenerate";
    case SolveStatus::skipped: return "skipped";
    case SolveStatus::refused: return "refused";
  }
  return "unknown";
}

void SolveReport::evaluate(const ChannelRealization& ch) {
  snrs = all_snrs(Q.Q, phase, ch);
  rates.resize(snrs.size());
  std::transform(snrs.begin(), snrs.end(), rates.begin(), [](double s) { return bits(s); });
  gamma = *std::min_element(snrs.begin(), snrs.end());
  capacity_bits = bits(gamma);
}

}  // namespace rismc
