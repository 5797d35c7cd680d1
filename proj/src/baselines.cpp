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

#include "rismc/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"
#include "rismc/sdp_engine.hpp"

namespace rismc::baselines {

namespace {

struct BlochPoint {
  double x, y, z;
};

std::vector<BlochPoint> bloch_grid(int levels) {
  std::vector<BlochPoint> pts;
  pts.push_back({0.0, 0.0, 0.0});
  for (int ir = 1; ir < levels; ++ir) {
    const double r = static_cast<double>(ir) / (levels - 1);
    for (int ip = 0; ip < levels; ++ip) {
      const double pol = kPi * ip / (levels - 1);
      const int naz = (ip == 0 || ip == levels - 1) ? 1 : 2 * levels;
      for (int ia = 0; ia < naz; ++ia) {
        const double az = kTwoPi * ia / naz;
        pts.push_back({r * std::sin(pol) * std::cos(az), r * std::sin(pol) * std::sin(az), r * std::cos(pol)});
      }
    }
  }
  return pts;
}

/// Largest distance from any point of the unit ball to the nearest grid point
/// (bounded by the radial and angular spacings).
double bloch_spacing(int levels) {
  const double dr = 1.0 / (levels - 1);
  const double dang = kPi / (levels - 1);
  return 0.5 * dr + dang;  // chord <= arc; half steps in polar and azimuth each below dang/2
}

struct Best {
  double value = -1.0;
  long long theta_index = -1;
  int q_index = -1;
};

bool better(const Best& a, const Best& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.theta_index != b.theta_index) return a.theta_index < b.theta_index;
  return a.q_index < b.q_index;
}

}  // namespace

ChannelRealization direct_links_only(const ChannelRealization& ch) {
  std::vector<CVector> h(ch.K(), CVector::Zero(ch.N()));
  return ChannelRealization::from_links(CMatrix::Zero(ch.N(), ch.M()), std::move(h), ch.t);
}

void GridSpec::validate() const {
  if (phase_levels < 2) throw DomainError("GridSpec: phase_levels must be >= 2");
  if (cov_levels < 2) throw DomainError("GridSpec: cov_levels must be >= 2");
  if (!(budget > 0.0)) throw DomainError("GridSpec: budget must be > 0");
}

double GridSpec::points(int M, int N) const {
  const double phases = std::pow(static_cast<double>(phase_levels), N);
  return M == 1 ? phases : phases * static_cast<double>(bloch_grid(cov_levels).size());
}

BruteForceResult brute_force(const ChannelRealization& ch, double p_max, const GridSpec& grid, bool parallel) {
  grid.validate();
  ch.validate();
  if (!(p_max > 0.0)) throw DomainError("brute_force: p_max must be > 0");
  const int M = ch.M(), N = ch.N(), K = ch.K();
  BruteForceResult out;
  out.report.method = "brute_force";
  out.evaluations = grid.points(M, N);
  if (M > 2 || N > 4 || out.evaluations > grid.budget) {
    std::ostringstream msg;
    msg << "brute force refused: M=" << M << " N=" << N << " needs " << out.evaluations
        << " grid points (budget " << grid.budget << ", limits M<=2, N<=4)";
    out.report.status = SolveStatus::refused;
    out.report.warnings.push_back(msg.str());
    out.report.Q = TransmitCovariance::scaled_identity(M, p_max);
    out.report.phase = PhaseConfig::zeros(N);
    out.report.evaluate(ch);
    return out;
  }

  const int L = grid.phase_levels;
  std::vector<Complex> phasor(L);
  for (int l = 0; l < L; ++l) phasor[l] = unit_phasor(kTwoPi * l / L);
  long long total = 1;
  for (int n = 0; n < N; ++n) total *= L;
  const std::vector<BlochPoint> qgrid = M == 2 ? bloch_grid(grid.cov_levels) : std::vector<BlochPoint>{};
  const int nq = static_cast<int>(qgrid.size());

  // cascade rows and conjugated direct links, flattened per user
  std::vector<Complex> rows(static_cast<std::size_t>(K) * N * M), direct(static_cast<std::size_t>(K) * M);
  for (int k = 0; k < K; ++k) {
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < M; ++m) rows[(static_cast<std::size_t>(k) * N + n) * M + m] = ch.cascade[k](n, m);
    for (int m = 0; m < M; ++m) direct[static_cast<std::size_t>(k) * M + m] = std::conj(ch.t[k](m));
  }

  auto eval_theta = [&](long long idx, Best& local) {
    int digits[4] = {0, 0, 0, 0};
    long long r = idx;
    for (int n = 0; n < N; ++n) {
      digits[n] = static_cast<int>(r % L);
      r /= L;
    }
    if (M == 1) {
      double worst = std::numeric_limits<double>::infinity();
      for (int k = 0; k < K; ++k) {
        Complex g = direct[k];
        for (int n = 0; n < N; ++n) g += phasor[digits[n]] * rows[static_cast<std::size_t>(k) * N + n];
        worst = std::min(worst, std::norm(g));
      }
      const Best cand{p_max * worst, idx, 0};
      if (better(cand, local)) local = cand;
      return;
    }
    // M == 2: snr_k = (P/2)(s0 + x sx + y sy + z sz)
    std::vector<std::array<double, 4>> coeff(K);
    for (int k = 0; k < K; ++k) {
      Complex g0 = direct[2 * k], g1 = direct[2 * k + 1];
      for (int n = 0; n < N; ++n) {
        const Complex u = phasor[digits[n]];
        g0 += u * rows[(static_cast<std::size_t>(k) * N + n) * 2];
        g1 += u * rows[(static_cast<std::size_t>(k) * N + n) * 2 + 1];
      }
      // g sigma g^H for the Pauli matrices
      const Complex cross = std::conj(g0) * g1;
      coeff[k] = {std::norm(g0) + std::norm(g1), 2.0 * cross.real(), -2.0 * cross.imag(),
                  std::norm(g0) - std::norm(g1)};
    }
    for (int q = 0; q < nq; ++q) {
      double worst = std::numeric_limits<double>::infinity();
      for (int k = 0; k < K; ++k) {
        const auto& c = coeff[k];
        worst = std::min(worst, c[0] + qgrid[q].x * c[1] + qgrid[q].y * c[2] + qgrid[q].z * c[3]);
      }
      const Best cand{0.5 * p_max * worst, idx, q};
      if (better(cand, local)) local = cand;
    }
  };

  Best best;
  if (parallel) {
#pragma omp parallel
    {
      Best local;
#pragma omp for schedule(static)
      for (long long idx = 0; idx < total; ++idx) eval_theta(idx, local);
#pragma omp critical
      if (better(local, best)) best = local;
    }
  } else {
    for (long long idx = 0; idx < total; ++idx) eval_theta(idx, best);
  }

  RVector theta(N);
  {
    long long r = best.theta_index;
    for (int n = 0; n < N; ++n) {
      theta(n) = kTwoPi * static_cast<double>(r % L) / L;
      r /= L;
    }
  }
  CMatrix Q(M, M);
  if (M == 1) {
    Q(0, 0) = p_max;
  } else {
    const BlochPoint& b = qgrid[best.q_index];
    Q(0, 0) = 0.5 * p_max * (1.0 + b.z);
    Q(1, 1) = 0.5 * p_max * (1.0 - b.z);
    Q(0, 1) = 0.5 * p_max * Complex(b.x, -b.y);
    Q(1, 0) = std::conj(Q(0, 1));
  }
  out.report.Q = {Q, p_max};
  out.report.phase = PhaseConfig(theta);
  out.report.iterations = 1;
  out.report.status = SolveStatus::converged;
  out.report.evaluate(ch);

  // Lipschitz bound: |d snr_k / d theta_n| <= 2 P |cascade_k row n| (sum_j |row j| + |t_k|)
  // and the nearest grid phase is within pi / L per coordinate.
  double err = 0.0;
  for (int k = 0; k < K; ++k) {
    double total_amp = ch.t[k].norm();
    for (int n = 0; n < N; ++n) total_amp += ch.cascade[k].row(n).norm();
    double e = 0.0;
    for (int n = 0; n < N; ++n) e += 2.0 * p_max * ch.cascade[k].row(n).norm() * total_amp * (kPi / L);
    if (M == 2) e += 0.5 * p_max * total_amp * total_amp * bloch_spacing(grid.cov_levels);
    err = std::max(err, e);
  }
  out.error_bound_bits = bits(out.report.gamma + err) - bits(out.report.gamma);
  return out;
}

BeamformingResult beamforming(const ChannelRealization& ch, double p_max, const BeamformingConfig& cfg) {
  ch.validate();
  if (!(p_max > 0.0)) throw DomainError("beamforming: p_max must be > 0");
  if (cfg.restarts < 1 || cfg.randomizations < 0 || cfg.max_outer < 1)
    throw DomainError("beamforming: invalid configuration");
  const int M = ch.M(), N = ch.N();
  CounterRng rng(derive_seed(cfg.seed, {0x626d66ULL}));

  auto min_gain = [&](const CVector& v, const PhaseConfig& ph) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < ch.K(); ++k) worst = std::min(worst, std::norm((effective_channel(ph, ch, k) * v).value()));
    return worst;
  };

  BeamformingResult best;
  best.rate_bits = -1.0;
  int total_iters = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    RVector th(N);
    for (int n = 0; n < N; ++n) th(n) = rng.uniform_angle();
    PhaseConfig phase(th);
    CVector v = CVector::Zero(M);
    double value = -1.0;
    for (int it = 0; it < cfg.max_outer; ++it) {
      ++total_iters;
      // Relaxed covariance step, then rank-one extraction.
      const alternating::QStep qs = alternating::q_step(phase, ch, p_max, cfg.theta.sdp);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(qs.Q.Q);
      CVector cand = es.eigenvectors().col(M - 1) * std::sqrt(p_max);
      double cand_val = min_gain(cand, phase);
      RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      const CMatrix root = es.eigenvectors() * ev.asDiagonal();
      for (int s = 0; s < cfg.randomizations; ++s) {
        CVector z(M);
        for (int m = 0; m < M; ++m) z(m) = rng.complex_gaussian();
        CVector xi = root * z;
        const double nrm = xi.norm();
        if (!(nrm > 0.0)) continue;
        xi *= std::sqrt(p_max) / nrm;
        const double val = min_gain(xi, phase);
        if (val > cand_val) {
          cand_val = val;
          cand = xi;
        }
      }
      if (cand_val <= value && it > 0) cand = v;  // keep the previous beam if it is still better
      // Phase step with the rank-one covariance.
      const TransmitCovariance Qv{cand * cand.adjoint(), p_max};
      const alternating::ThetaStep ts = alternating::theta_step(Qv, ch, phase.theta(), cfg.theta,
                                                                derive_seed(cfg.seed, {static_cast<std::uint64_t>(r),
                                                                                       static_cast<std::uint64_t>(it)}));
      const double next = min_gain(cand, ts.phase);
      const double prev = value;
      if (next >= value) {
        v = cand;
        phase = ts.phase;
        value = next;
      }
      if (prev >= 0.0 && std::fabs(value - prev) <= cfg.delta * std::max(1.0, value)) break;
    }
    const double rate = bits(std::max(0.0, value));
    if (rate > best.rate_bits) {
      best.rate_bits = rate;
      best.v = v;
      best.phase = phase;
      best.report.init_index = r;
    }
  }
  best.report.method = "beamforming";
  best.report.Q = {best.v * best.v.adjoint(), p_max};
  best.report.Q.Q = 0.5 * (best.report.Q.Q + best.report.Q.Q.adjoint());
  best.report.phase = best.phase;
  best.report.iterations = total_iters;
  best.report.status = SolveStatus::converged;
  best.report.evaluate(ch);
  best.rate_bits = best.report.capacity_bits;
  return best;
}

SolveReport no_ris(const ChannelRealization& ch, double p_max) {
  ch.validate();
  if (!(p_max > 0.0)) throw DomainError("no_ris: p_max must be > 0");
  std::vector<CMatrix> R;
  for (int k = 0; k < ch.K(); ++k) R.push_back(ch.t[k] * ch.t[k].adjoint());
  const sdp::MaxMinResult res = sdp::maxmin_q_step(R, p_max);
  SolveReport rep;
  rep.method = "no_ris";
  rep.Q = res.Q;
  rep.phase = PhaseConfig::zeros(ch.N());
  rep.iterations = res.solution.iterations;
  rep.status = res.solution.status == sdp::Status::optimal ? SolveStatus::converged : SolveStatus::max_iterations;
  rep.evaluate(direct_links_only(ch));
  return rep;
}

}  // namespace rismc::baselines
