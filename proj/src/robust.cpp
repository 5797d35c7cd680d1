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

#include "rismc/robust.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

namespace rismc::baselines {

namespace {

/// w = v (x) u, indexed like the column-stacked N x M cascade error.
CVector kron_vu(const CVector& v, const CVector& u) {
  const Eigen::Index N = u.size();
  CVector w(N * v.size());
  for (Eigen::Index m = 0; m < v.size(); ++m) w.segment(m * N, N) = v(m) * u;
  return w;
}

Complex nominal_signal(const UncertaintyModel& model, int k, const CVector& v, const CVector& u) {
  return (u.transpose() * model.estimate.cascade[k] * v).value() + (model.estimate.t[k].adjoint() * v).value();
}

/// Extracts F0 and the per-variable coefficient matrices of a real-affine
/// Hermitian matrix function.
sdp::LmiConstraint affine_lmi(int nvars, const std::function<CMatrix(const RVector&)>& F) {
  RVector x = RVector::Zero(nvars);
  sdp::LmiConstraint lmi;
  lmi.F0 = F(x);
  const double floor = 1e-14 * std::max(1.0, lmi.F0.cwiseAbs().maxCoeff());
  for (int i = 0; i < nvars; ++i) {
    x(i) = 1.0;
    const CMatrix Fi = F(x) - lmi.F0;
    x(i) = 0.0;
    for (Eigen::Index c = 0; c < Fi.cols(); ++c)
      for (Eigen::Index r = 0; r < Fi.rows(); ++r)
        if (std::abs(Fi(r, c)) > floor) lmi.add(i, static_cast<int>(r), static_cast<int>(c), Fi(r, c));
  }
  return lmi;
}

sdp::LinearConstraint bound_below_zero(int nvars, int var) {
  sdp::LinearConstraint lc{RVector::Zero(nvars), 0.0};
  lc.a(var) = -1.0;
  return lc;
}

double min_eig(const CMatrix& F) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(F, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Multiplier that maximizes the smallest certificate eigenvalue (a concave
/// function of the multiplier), by ternary search.
double best_slack(const UncertaintyModel& model, int k, const CVector& v, const CVector& u, const CVector& v_ref,
                  const CVector& u_ref) {
  const double eps = model.eps[k];
  if (eps == 0.0) return 0.0;
  const double corner = certificate_matrix(model, k, v, u, v_ref, u_ref, 0.0, 0.0).bottomRightCorner(1, 1)(0, 0).real();
  if (!(corner > 0.0)) return 1.0;
  double lo = 0.0, hi = corner / (eps * eps);
  for (int it = 0; it < 80; ++it) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (min_eig(certificate_matrix(model, k, v, u, v_ref, u_ref, a, 0.0)) <
        min_eig(certificate_matrix(model, k, v, u, v_ref, u_ref, b, 0.0)))
      lo = a;
    else
      hi = b;
  }
  return 0.5 * (lo + hi);
}

struct TransmitStep {
  bool feasible = false;
  CVector v;
  std::vector<double> slack;
};

/// Minimize ||v||^2 under the certificates linearized around (v_ref, u).
TransmitStep transmit_step(const UncertaintyModel& model, const CVector& u, const CVector& v_ref,
                           const sdp::Options& opt) {
  const int M = model.estimate.M(), K = model.estimate.K();
  std::vector<int> slack_var(K, -1);
  int nv = 2 * M;
  for (int k = 0; k < K; ++k)
    if (model.eps[k] > 0.0) slack_var[k] = nv++;
  const int s_var = nv++;

  auto v_of = [M](const RVector& x) {
    CVector v(M);
    for (int m = 0; m < M; ++m) v(m) = Complex(x(m), x(M + m));
    return v;
  };

  sdp::ConicProblem prob;
  prob.num_vars = nv;
  prob.c = RVector::Zero(nv);
  prob.c(s_var) = 1.0;
  for (int k = 0; k < K; ++k) {
    prob.lmis.push_back(affine_lmi(nv, [&, k](const RVector& x) {
      const double w = slack_var[k] >= 0 ? x(slack_var[k]) : 0.0;
      return certificate_matrix(model, k, v_of(x), u, v_ref, u, w, 0.0);
    }));
    if (slack_var[k] >= 0) prob.linear.push_back(bound_below_zero(nv, slack_var[k]));
  }
  prob.lmis.push_back(affine_lmi(nv, [&](const RVector& x) {
    CMatrix E = CMatrix::Identity(M + 1, M + 1);
    const CVector v = v_of(x);
    E.block(0, M, M, 1) = v;
    E.block(M, 0, 1, M) = v.adjoint();
    E(M, M) = x(s_var);
    return E;
  }));

  // Start from a slightly scaled-up reference beam, which stays certified
  // whenever the reference is.
  prob.x0 = RVector::Zero(nv);
  const CVector v_start = 1.01 * v_ref;
  for (int m = 0; m < M; ++m) {
    prob.x0(m) = v_start(m).real();
    prob.x0(M + m) = v_start(m).imag();
  }
  for (int k = 0; k < K; ++k)
    if (slack_var[k] >= 0) prob.x0(slack_var[k]) = best_slack(model, k, v_start, u, v_ref, u);
  prob.x0(s_var) = 1.1 * v_start.squaredNorm() + 1e-3;

  const sdp::ConicSolution sol = sdp::solve(prob, opt);
  TransmitStep out;
  if (sol.status == sdp::Status::infeasible) return out;
  out.feasible = true;
  out.v = v_of(sol.x);
  out.slack.assign(K, 0.0);
  for (int k = 0; k < K; ++k)
    if (slack_var[k] >= 0) out.slack[k] = sol.x(slack_var[k]);
  return out;
}

struct PhaseStep {
  bool feasible = false;
  CVector u;
};

/// Maximize the summed certificate margins minus the unit-modulus penalty,
/// with |u_n| <= 1 and the concave side |u_n| >= 1 linearized at u_ref.
PhaseStep phase_step(const UncertaintyModel& model, const CVector& v, const CVector& u_ref, double iota,
                     const sdp::Options& opt) {
  const int N = model.estimate.N(), K = model.estimate.K();
  std::vector<int> slack_var(K, -1);
  int nv = 2 * N;
  for (int k = 0; k < K; ++k)
    if (model.eps[k] > 0.0) slack_var[k] = nv++;
  const int margin0 = nv;
  nv += K;
  const int pen0 = nv;
  nv += N;

  auto u_of = [N](const RVector& x) {
    CVector u(N);
    for (int n = 0; n < N; ++n) u(n) = Complex(x(n), x(N + n));
    return u;
  };

  sdp::ConicProblem prob;
  prob.num_vars = nv;
  prob.c = RVector::Zero(nv);
  // Objective scaled by 1 / max(1, iota) so the barrier tolerance stays
  // relative to the largest cost coefficient.
  const double scale = 1.0 / std::max(1.0, iota);
  for (int k = 0; k < K; ++k) prob.c(margin0 + k) = -scale;
  for (int n = 0; n < N; ++n) prob.c(pen0 + n) = iota * scale;

  for (int k = 0; k < K; ++k) {
    prob.lmis.push_back(affine_lmi(nv, [&, k](const RVector& x) {
      const double w = slack_var[k] >= 0 ? x(slack_var[k]) : 0.0;
      return certificate_matrix(model, k, v, u_of(x), v, u_ref, w, x(margin0 + k));
    }));
    if (slack_var[k] >= 0) prob.linear.push_back(bound_below_zero(nv, slack_var[k]));
    prob.linear.push_back(bound_below_zero(nv, margin0 + k));
  }
  for (int n = 0; n < N; ++n) {
    sdp::LmiConstraint disk;
    disk.F0 = CMatrix::Identity(2, 2);
    disk.add_hermitian(n, 0, 1, Complex(1.0, 0.0));
    disk.add_hermitian(N + n, 0, 1, Complex(0.0, 1.0));
    prob.lmis.push_back(disk);
    prob.linear.push_back(bound_below_zero(nv, pen0 + n));
    // |u_ref|^2 - 2 Re(conj(u) u_ref) <= penalty - 1
    sdp::LinearConstraint lc{RVector::Zero(nv), -1.0 - std::norm(u_ref(n))};
    lc.a(n) = -2.0 * u_ref(n).real();
    lc.a(N + n) = -2.0 * u_ref(n).imag();
    lc.a(pen0 + n) = -1.0;
    prob.linear.push_back(lc);
  }

  // Start just inside the unit disks at the reference phases, with half of
  // the certificate's eigenvalue headroom as margin.
  prob.x0 = RVector::Zero(nv);
  const CVector u_start = 0.999 * u_ref;
  for (int n = 0; n < N; ++n) {
    prob.x0(n) = u_start(n).real();
    prob.x0(N + n) = u_start(n).imag();
    prob.x0(pen0 + n) = 1.0 - std::norm(u_ref(n)) + 0.1;
  }
  for (int k = 0; k < K; ++k) {
    const double w = best_slack(model, k, v, u_start, v, u_ref);
    if (slack_var[k] >= 0) prob.x0(slack_var[k]) = w;
    prob.x0(margin0 + k) = 0.5 * std::max(0.0, min_eig(certificate_matrix(model, k, v, u_start, v, u_ref, w, 0.0)));
  }

  const sdp::ConicSolution sol = sdp::solve(prob, opt);
  PhaseStep out;
  if (sol.status == sdp::Status::infeasible) return out;
  out.feasible = true;
  out.u = u_of(sol.x);
  return out;
}

PhaseConfig project_unit_modulus(const CVector& u, const CVector& fallback) {
  RVector theta(u.size());
  for (Eigen::Index n = 0; n < u.size(); ++n)
    theta(n) = std::abs(u(n)) > 1e-12 ? std::arg(u(n)) : std::arg(fallback(n));
  return PhaseConfig(theta);
}

}  // namespace

void UncertaintyModel::validate() const {
  estimate.validate();
  if (static_cast<int>(eps.size()) != estimate.K())
    throw DimensionError("UncertaintyModel: one radius per user is required");
  for (double e : eps)
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("UncertaintyModel: radii must be finite and >= 0");
  if (!(target_rate_bits > 0.0) || !std::isfinite(target_rate_bits))
    throw DomainError("UncertaintyModel: target rate must be > 0");
}

double worst_case_snr(const UncertaintyModel& model, const CVector& v, const PhaseConfig& phase, int k) {
  const CVector u = phase.u();
  const double amp = std::abs(nominal_signal(model, k, v, u)) - model.eps[k] * v.norm() * u.norm();
  return amp > 0.0 ? amp * amp : 0.0;
}

Complex perturbed_signal(const UncertaintyModel& model, const CVector& v, const PhaseConfig& phase, int k,
                         const CMatrix& dC) {
  const CVector u = phase.u();
  return nominal_signal(model, k, v, u) + (u.transpose() * dC * v).value();
}

CMatrix certificate_matrix(const UncertaintyModel& model, int k, const CVector& v, const CVector& u,
                           const CVector& v_ref, const CVector& u_ref, double slack, double margin) {
  const Complex s = nominal_signal(model, k, v, u);
  const Complex s_ref = nominal_signal(model, k, v_ref, u_ref);
  const double phi = 2.0 * (std::conj(s_ref) * s).real() - std::norm(s_ref);
  const double corner = phi - model.snr_target() - margin;
  const double eps = model.eps[k];
  if (eps == 0.0) return CMatrix::Constant(1, 1, Complex(corner, 0.0));

  const CVector w = kron_vu(v, u);
  const CVector w_ref = kron_vu(v_ref, u_ref);
  const CVector wc = w.conjugate();
  const CVector wc_ref = w_ref.conjugate();
  const Eigen::Index d = w.size();
  CMatrix F(d + 1, d + 1);
  F.topLeftCorner(d, d) = wc_ref * w.transpose() + wc * w_ref.transpose() - wc_ref * w_ref.transpose();
  F.topLeftCorner(d, d).diagonal().array() += slack;
  const CVector l = s_ref * wc + s * wc_ref - s_ref * wc_ref;
  F.topRightCorner(d, 1) = l;
  F.bottomLeftCorner(1, d) = l.adjoint();
  F(d, d) = corner - slack * eps * eps;
  return F;
}

RobustResult robust_beamforming(const UncertaintyModel& model, const RobustConfig& cfg, const RobustResult* warm) {
  model.validate();
  const int M = model.estimate.M(), N = model.estimate.N(), K = model.estimate.K();
  if (M > cfg.max_dim || N > cfg.max_dim)
    throw DomainError("robust_beamforming: M and N must not exceed the dimension guard");
  if (cfg.iota0 <= 0.0 || cfg.eta <= 1.0 || cfg.iota_max < cfg.iota0 || cfg.max_outer < 1 || cfg.max_inner < 1)
    throw DomainError("robust_beamforming: invalid configuration");
  const double target = model.snr_target();

  RobustResult out;
  out.phase = PhaseConfig::zeros(N);
  out.v = CVector::Zero(M);

  CVector v0;
  CVector u;
  if (warm != nullptr && warm->status != SolveStatus::infeasible && warm->v.size() == M &&
      warm->phase.N() == N) {
    v0 = warm->v;
    u = warm->phase.u();
  } else {
    BeamformingConfig bcfg = cfg.init;
    bcfg.seed = derive_seed(cfg.seed, {0x726273ULL});
    const BeamformingResult bf = beamforming(model.estimate, 1.0, bcfg);
    const CVector dir = bf.v / bf.v.norm();
    u = bf.phase.u();
    double worst = std::numeric_limits<double>::infinity();
    double nominal = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const double amp = std::abs(nominal_signal(model, k, dir, u));
      nominal = std::min(nominal, amp);
      worst = std::min(worst, amp - model.eps[k] * std::sqrt(static_cast<double>(N)));
    }
    // Scale so the closed-form worst case clears the target when possible.
    const double gain = worst > 0.0 ? worst : std::max(nominal, 1e-12);
    v0 = dir * (1.05 * std::sqrt(target) / gain);
  }

  TransmitStep ts = transmit_step(model, u, v0, cfg.sdp);
  if (!ts.feasible) {
    out.status = SolveStatus::infeasible;
    return out;
  }
  CVector v = ts.v;
  std::vector<double> slack = ts.slack;
  double power = v.squaredNorm();
  out.power_trace.push_back(power);
  SolveStatus status = SolveStatus::max_iterations;
  int iters = 0;
  for (int it = 0; it < cfg.max_outer; ++it) {
    ++iters;
    CVector uj = u;
    double iota = cfg.iota0;
    for (int j = 0; j < cfg.max_inner; ++j) {
      const PhaseStep ps = phase_step(model, v, uj, iota, cfg.sdp);
      if (!ps.feasible) break;
      const double move = (ps.u - uj).norm();
      uj = ps.u;
      iota = std::min(iota * cfg.eta, cfg.iota_max);
      if (move <= cfg.delta2) break;
    }
    const CVector u_next = project_unit_modulus(uj, u).u();
    const TransmitStep next = transmit_step(model, u_next, v, cfg.sdp);
    const double prev_norm = std::sqrt(power);
    bool moved = false;
    if (next.feasible && next.v.squaredNorm() <= power) {
      v = next.v;
      u = u_next;
      slack = next.slack;
      power = v.squaredNorm();
      out.power_trace.push_back(power);
      moved = true;
    }
    if (!moved || std::fabs(std::sqrt(power) - prev_norm) <= cfg.delta1) {
      status = SolveStatus::converged;
      break;
    }
  }

  out.v = v;
  out.phase = project_unit_modulus(u, u);
  out.power = power;
  out.slack = slack;
  out.iterations = iters;
  out.status = status;
  return out;
}

std::vector<RobustResult> power_profile(const ChannelRealization& estimate, double target_rate_bits,
                                        const std::vector<double>& eps_values, const RobustConfig& cfg) {
  std::vector<std::size_t> order(eps_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eps_values[a] > eps_values[b]; });
  std::vector<RobustResult> out(eps_values.size());
  const RobustResult* prev = nullptr;
  for (std::size_t idx : order) {
    UncertaintyModel model{estimate, std::vector<double>(estimate.K(), eps_values[idx]), target_rate_bits};
    RobustResult best = robust_beamforming(model, cfg);
    if (prev != nullptr) {
      RobustResult warmed = robust_beamforming(model, cfg, prev);
      const bool take = warmed.status != SolveStatus::infeasible &&
                        (best.status == SolveStatus::infeasible || warmed.power < best.power);
      if (take) best = std::move(warmed);
    }
    out[idx] = std::move(best);
    if (out[idx].status != SolveStatus::infeasible) prev = &out[idx];
  }
  return out;
}

}  // namespace rismc::baselines
