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

#include "rismc/special_case.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rismc/errors.hpp"
#include "rismc/krawczyk.hpp"
#include "rismc/rng.hpp"

namespace rismc::special {

namespace {

RVector wrapped(RVector th) {
  for (Eigen::Index i = 0; i < th.size(); ++i) th(i) = wrap_angle(th(i));
  return th;
}

double gain(const CMatrix& I, const ChannelRealization& ch, int k0, const RVector& th) {
  return snr(I, PhaseConfig(th), ch, k0);
}

/// Gradient ascent followed by Newton refinement on the stationarity
/// condition while the Hessian is negative definite.
RVector ascend(const CMatrix& I, const ChannelRealization& ch, int k0, RVector th) {
  double f = gain(I, ch, k0, th);
  double step = 1.0 / std::max(1e-300, f);
  for (int it = 0; it < 500; ++it) {
    const RVector g = snr_theta_gradient(I, PhaseConfig(th), ch, k0);
    const double g2 = g.squaredNorm();
    if (g2 <= 1e-24 * f * f) break;
    bool accepted = false;
    while (step * std::sqrt(g2) > 1e-14) {
      const RVector trial = th + step * g;
      const double f_new = gain(I, ch, k0, trial);
      if (f_new >= f + 1e-4 * step * g2) {
        th = trial;
        f = f_new;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (g2 <= 1e-10 * f * f) break;  // close enough for Newton
  }
  for (int it = 0; it < 30; ++it) {
    const PhaseConfig ph(th);
    const RVector g = snr_theta_gradient(I, ph, ch, k0);
    if (g.norm() <= 1e-13 * std::max(1.0, f)) break;
    const RMatrix Hs = snr_theta_hessian(I, ph, ch, k0);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(Hs);
    if (es.eigenvalues().maxCoeff() >= 0.0) break;
    const RVector trial = th - Hs.ldlt().solve(g);
    const double f_new = gain(I, ch, k0, trial);
    if (!(f_new >= f - 1e-12 * f)) break;
    th = trial;
    f = f_new;
  }
  return wrapped(th);
}

}  // namespace

RVector single_antenna_phases(const ChannelRealization& ch, int k0) {
  if (ch.M() != 1) throw DimensionError("single_antenna_phases: requires M = 1");
  if (k0 < 0 || k0 >= ch.K()) throw DimensionError("single_antenna_phases: user index out of range");
  const double arg_t = std::arg(ch.t[k0](0));
  RVector th(ch.N());
  for (int n = 0; n < ch.N(); ++n) th(n) = wrap_angle(-(std::arg(ch.h[k0](n)) + std::arg(ch.H(n, 0)) + arg_t));
  return th;
}

P3Result solve_p3(const ChannelRealization& ch, int k0, const P3Options& opt) {
  if (k0 < 0 || k0 >= ch.K()) throw DimensionError("solve_p3: user index out of range");
  if (opt.restarts < 1) throw DomainError("solve_p3: restarts must be >= 1");
  const int N = ch.N();
  const CMatrix I = CMatrix::Identity(ch.M(), ch.M());
  P3Result res;

  const TrigExpansion te = trig_expansion(TransmitCovariance{I, static_cast<double>(ch.M())}, ch, k0);
  double coupling = te.c.size() ? te.c.maxCoeff() : 0.0;
  if (te.b.size()) coupling = std::max(coupling, te.b.maxCoeff());
  if (coupling <= 1e-14 * std::max(te.a, 1e-300)) {
    res.phase = PhaseConfig::zeros(N);
    res.gain = gain(I, ch, k0, res.phase.theta());
    res.degenerate = true;
    return res;
  }

  std::vector<RVector> cands;
  if (ch.M() == 1) cands.push_back(single_antenna_phases(ch, k0));
  if (N <= opt.krawczyk_max_N) {
    TrigSystem sys;
    sys.b = RMatrix::Zero(N, N);
    sys.psi = RMatrix::Zero(N, N);
    sys.c = 2.0 * te.c;
    sys.omega = te.omega;
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        sys.b(i, j) = sys.b(j, i) = 2.0 * te.b(i, j);
        sys.psi(i, j) = te.psi(i, j);
        sys.psi(j, i) = -te.psi(i, j);
      }
    }
    for (const RVector& root : krawczyk_solve(sys).roots) cands.push_back(root);
  }
  CounterRng rng(derive_seed(opt.seed, {0x7033ULL, static_cast<std::uint64_t>(k0)}));
  for (int r = 0; r < opt.restarts; ++r) {
    RVector th(N);
    for (int n = 0; n < N; ++n) th(n) = rng.uniform_angle();
    cands.push_back(ascend(I, ch, k0, th));
  }

  double best = -1.0;
  RVector best_th;
  for (const RVector& th : cands) {
    const double f = gain(I, ch, k0, th);
    const bool lex = best_th.size() && std::lexicographical_compare(th.data(), th.data() + N, best_th.data(),
                                                                    best_th.data() + N);
    if (f > best * (1.0 + 1e-12) || (f >= best * (1.0 - 1e-12) && lex)) {
      best = f;
      best_th = th;
    }
  }
  best_th = ascend(I, ch, k0, best_th);
  res.phase = PhaseConfig(best_th);
  res.gain = gain(I, ch, k0, best_th);
  res.residual = snr_theta_gradient(I, res.phase, ch, k0).norm() / std::max(res.gain, 1e-300);
  return res;
}

MisoResult miso_capacity_and_q(const PhaseConfig& phase, const ChannelRealization& ch, int k0, double p_max) {
  if (!(p_max > 0.0)) throw DomainError("miso_capacity_and_q: p_max must be > 0");
  const CRowVector g = effective_channel(phase, ch, k0);
  const double g2 = g.squaredNorm();
  MisoResult r;
  if (!(g2 > 0.0)) {
    r.Q = {CMatrix::Zero(ch.M(), ch.M()), p_max};
    r.degenerate = true;
    return r;
  }
  CMatrix Q = (p_max / g2) * (g.adjoint() * g);
  r.Q = {0.5 * (Q + Q.adjoint()), p_max};
  r.capacity_bits = bits(p_max * g2);
  return r;
}

std::vector<int> candidate_order(const ChannelRealization& ch) {
  std::vector<double> strength(ch.K());
  for (int k = 0; k < ch.K(); ++k) strength[k] = ch.cascade[k].norm() + ch.t[k].norm();
  std::vector<int> order(ch.K());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return strength[a] < strength[b]; });
  return order;
}

std::optional<SpecialCaseResult> detect_and_solve(const ChannelRealization& ch, double p_max,
                                                  const P3Options& opt) {
  ch.validate();
  for (int k0 : candidate_order(ch)) {
    const P3Result p3 = solve_p3(ch, k0, opt);
    const MisoResult miso = miso_capacity_and_q(p3.phase, ch, k0, p_max);
    SpecialCaseResult res;
    res.k0 = k0;
    res.phase = p3.phase;
    res.Q = miso.Q;
    res.degenerate = p3.degenerate || miso.degenerate;
    const double r0 = rate(miso.Q, p3.phase, ch, k0);
    res.capacity_bits = r0;
    bool ok = true;
    for (int k = 0; k < ch.K(); ++k) {
      res.margins.push_back(rate(miso.Q, p3.phase, ch, k) - r0);
      if (res.margins.back() < -1e-9) ok = false;
    }
    if (ok) return res;
  }
  return std::nullopt;
}

SolveReport solve(const ChannelRealization& ch, double p_max, const P3Options& opt) {
  SolveReport rep;
  rep.method = "special_case";
  const auto res = detect_and_solve(ch, p_max, opt);
  if (!res) {
    rep.Q = TransmitCovariance::scaled_identity(ch.M(), p_max);
    rep.phase = PhaseConfig::zeros(ch.N());
    rep.evaluate(ch);
    rep.status = SolveStatus::skipped;
    rep.warnings.push_back("special-case condition not satisfied for any user");
    return rep;
  }
  rep.Q = res->Q;
  rep.phase = res->phase;
  rep.init_index = res->k0;
  rep.iterations = 1;
  rep.status = res->degenerate ? SolveStatus::degenerate : SolveStatus::converged;
  rep.evaluate(ch);
  return rep;
}

}  // namespace rismc::special
