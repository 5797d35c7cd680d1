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

#include "rismc/barrier_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

namespace rismc::barrier {

namespace {

struct Slacks {
  std::vector<CRowVector> g;  // effective channels
  std::vector<double> s;      // snr_k - gamma
  double power = 0.0;         // P - Tr Q
};

Slacks slacks(const BarrierState& st, const ChannelRealization& ch) {
  if (st.theta.size() != ch.N() || st.Q.M() != ch.M()) throw DimensionError("barrier: state dimensions");
  const PhaseConfig phase(st.theta);
  Slacks out;
  out.g.reserve(ch.K());
  out.s.reserve(ch.K());
  for (int k = 0; k < ch.K(); ++k) {
    out.g.push_back(effective_channel(phase, ch, k));
    out.s.push_back((out.g.back() * st.Q.Q * out.g.back().adjoint())(0, 0).real() - st.gamma);
  }
  out.power = st.Q.p_max - st.Q.Q.trace().real();
  return out;
}

/// log det Q via Cholesky; nullopt when Q is not positive definite.
std::optional<double> log_det(const CMatrix& Q) {
  Eigen::LLT<CMatrix> llt(Q);
  if (llt.info() != Eigen::Success) return std::nullopt;
  double v = 0.0;
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    const double d = llt.matrixLLT()(i, i).real();
    if (!(d > 0.0)) return std::nullopt;
    v += 2.0 * std::log(d);
  }
  return v;
}

/// Normalized copy of the instance: channels scaled so every SNR is at most
/// p_max * 1 and the power budget becomes 1.
struct Scaling {
  double channel = 1.0;  // multiply channels by this
  double power = 1.0;    // Q_normalized = Q / power
  double snr() const { return 1.0 / (channel * channel * power); }  // snr = snr_normalized * snr()
};

Scaling choose_scaling(const ChannelRealization& ch, double p_max) {
  double kappa = 0.0;
  for (int k = 0; k < ch.K(); ++k) {
    double bound = ch.t[k].norm();
    for (int n = 0; n < ch.N(); ++n) bound += ch.cascade[k].row(n).norm();
    kappa = std::max(kappa, bound * bound);
  }
  Scaling sc;
  sc.power = p_max;
  sc.channel = kappa > 0.0 ? 1.0 / std::sqrt(kappa) : 1.0;
  return sc;
}

ChannelRealization scaled_channels(const ChannelRealization& ch, double f) {
  std::vector<CVector> h = ch.h, t = ch.t;
  for (auto& v : t) v *= f;
  ChannelRealization out = ChannelRealization::from_links(ch.H * f, std::move(h), std::move(t));
  out.gains = ch.gains;
  return out;
}

struct RunResult {
  BarrierState state;
  std::vector<int> breaks;
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
};

RunResult run(const ChannelRealization& ch, BarrierState st, const BarrierConfig& cfg) {
  RunResult r;
  bool stalled = false;
  bool budget = false;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    r.breaks.push_back(static_cast<int>(st.trace.size()));
    st.trace.push_back(barrier_value(st, ch));
    for (int inner = 0; inner < cfg.max_inner; ++inner) {
      const Direction d = gradients(st, ch);
      if (d.squared_norm() <= cfg.delta2) break;
      const BacktrackResult bt = backtrack(st, ch, d, cfg.alpha, cfg.eta);
      if (bt.stalled) {
        stalled = true;
        break;
      }
      st = step(st, d, bt.step);
      st.trace.push_back(barrier_value(st, ch));
      ++r.iterations;
      if (inner + 1 == cfg.max_inner) budget = true;
    }
    if (1.0 / st.t <= cfg.delta1) break;
    st.t *= cfg.rho;
  }
  if (1.0 / st.t > cfg.delta1) budget = true;
  r.status = stalled ? SolveStatus::stalled : (budget ? SolveStatus::max_iterations : SolveStatus::converged);
  r.state = std::move(st);
  return r;
}

}  // namespace

void BarrierConfig::validate() const {
  if (!(t0 > 0.0)) throw DomainError("BarrierConfig: t0 must be > 0");
  if (!(rho > 1.0)) throw DomainError("BarrierConfig: rho must be > 1");
  if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("BarrierConfig: alpha must lie in (0, 0.5)");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("BarrierConfig: eta must lie in (0, 1)");
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) throw DomainError("BarrierConfig: tolerances must be > 0");
  if (max_inner < 1 || max_outer < 1 || restarts < 1) throw DomainError("BarrierConfig: iteration counts must be >= 1");
}

double barrier_value(const BarrierState& s, const ChannelRealization& ch) {
  const Slacks sl = slacks(s, ch);
  double f = 0.0;
  for (int k = 0; k < ch.K(); ++k) {
    if (!(sl.s[k] > 0.0)) throw DomainError("barrier: snr of user " + std::to_string(k) + " does not exceed gamma");
    f += std::log(sl.s[k]);
  }
  if (!(sl.power > 0.0)) throw DomainError("barrier: trace of Q reaches the power budget");
  f += std::log(sl.power);
  const auto ld = log_det(s.Q.Q);
  if (!ld) throw DomainError("barrier: Q is not positive definite");
  f += *ld;
  return -s.gamma - f / s.t;
}

bool is_interior(const BarrierState& s, const ChannelRealization& ch) {
  if (!s.theta.allFinite() || !std::isfinite(s.gamma) || !s.Q.Q.allFinite()) return false;
  const Slacks sl = slacks(s, ch);
  for (double v : sl.s)
    if (!(v > 0.0)) return false;
  if (!(sl.power > 0.0)) return false;
  return log_det(s.Q.Q).has_value();
}

Direction gradients(const BarrierState& s, const ChannelRealization& ch) {
  const Slacks sl = slacks(s, ch);
  const int M = ch.M();
  const PhaseConfig phase(s.theta);
  Direction d;
  d.dQ = CMatrix::Zero(M, M);
  d.dtheta = RVector::Zero(ch.N());
  double inv_sum = 0.0;
  for (int k = 0; k < ch.K(); ++k) {
    const double w = 1.0 / sl.s[k];
    inv_sum += w;
    d.dQ.noalias() += w * (sl.g[k].adjoint() * sl.g[k]);
    // d snr_k / d theta_n = 2 Re(j u_n cascade_k(n,:) Q g_k^H)
    const CVector cw = ch.cascade[k] * (s.Q.Q * sl.g[k].adjoint());
    for (int n = 0; n < ch.N(); ++n) d.dtheta(n) += w * (-2.0) * (phase.u()(n) * cw(n)).imag();
  }
  const CMatrix Qinv = s.Q.Q.llt().solve(CMatrix::Identity(M, M));
  d.dQ += Qinv - CMatrix::Identity(M, M) / sl.power;
  d.dQ /= s.t;
  d.dQ = 0.5 * (d.dQ + d.dQ.adjoint());
  d.dtheta /= s.t;
  d.dgamma = 1.0 - inv_sum / s.t;
  return d;
}

BarrierState step(const BarrierState& s, const Direction& d, double l) {
  BarrierState out;
  out.Q = {s.Q.Q + l * d.dQ, s.Q.p_max};
  out.theta = s.theta + l * d.dtheta;
  for (Eigen::Index n = 0; n < out.theta.size(); ++n) out.theta(n) = wrap_angle(out.theta(n));
  out.gamma = s.gamma + l * d.dgamma;
  out.t = s.t;
  out.trace = s.trace;
  return out;
}

BacktrackResult backtrack(const BarrierState& s, const ChannelRealization& ch, const Direction& d,
                          double alpha, double eta) {
  const double f0 = barrier_value(s, ch);
  const double norm2 = d.squared_norm();
  BacktrackResult r;
  if (norm2 == 0.0) return r;
  BarrierState trial;
  trial.Q.p_max = s.Q.p_max;
  trial.t = s.t;
  while (r.step >= 1e-12) {
    trial.Q.Q = s.Q.Q + r.step * d.dQ;
    trial.theta = s.theta + r.step * d.dtheta;
    for (Eigen::Index n = 0; n < trial.theta.size(); ++n) trial.theta(n) = wrap_angle(trial.theta(n));
    trial.gamma = s.gamma + r.step * d.dgamma;
    if (is_interior(trial, ch) && barrier_value(trial, ch) < f0 - alpha * r.step * norm2) return r;
    r.step *= eta;
  }
  r.stalled = true;
  return r;
}

SolveReport solve(const ChannelRealization& ch, double p_max, const BarrierConfig& cfg,
                  const std::optional<InitialPoint>& init) {
  cfg.validate();
  ch.validate();
  if (!(p_max > 0.0)) throw DomainError("barrier: p_max must be > 0");
  const int M = ch.M();
  const Scaling sc = choose_scaling(ch, p_max);
  const ChannelRealization nch = scaled_channels(ch, sc.channel);

  CounterRng rng(derive_seed(cfg.seed, {0x62617272ULL}));
  SolveReport best;
  best.method = "barrier";
  bool have_best = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    BarrierState st;
    st.t = cfg.t0;
    RVector theta(ch.N());
    for (int n = 0; n < ch.N(); ++n) theta(n) = rng.uniform_angle();
    st.Q = TransmitCovariance::scaled_identity(M, 1.0, 0.5);
    if (r == 0 && init) {
      if (init->theta.size() != ch.N() || init->Q.rows() != M) throw DimensionError("barrier: init dimensions");
      theta = init->theta;
      const CMatrix Qn = init->Q / p_max;
      BarrierState probe;
      probe.Q = {Qn, 1.0};
      probe.theta = theta;
      probe.gamma = -1.0;
      if (is_interior(probe, nch)) st.Q.Q = Qn;
    }
    st.theta = theta;
    const double m0 = min_snr(st.Q.Q, PhaseConfig(st.theta), nch);
    st.gamma = m0 > 0.0 ? 0.9 * m0 : -1e-3;
    RunResult rr = run(nch, std::move(st), cfg);

    SolveReport rep;
    rep.method = "barrier";
    rep.Q = {rr.state.Q.Q * sc.power, p_max};
    rep.Q.Q = 0.5 * (rep.Q.Q + rep.Q.Q.adjoint());
    rep.phase = PhaseConfig(rr.state.theta);
    rep.iterations = rr.iterations;
    rep.status = rr.status;
    rep.trace = rr.state.trace;
    rep.trace_breaks = rr.breaks;
    rep.init_index = r;
    rep.evaluate(ch);
    if (!have_best || rep.capacity_bits > best.capacity_bits) {
      const int total = have_best ? best.iterations : 0;
      best = std::move(rep);
      best.iterations += total;
      have_best = true;
    } else {
      best.iterations += rep.iterations;
    }
  }
  return best;
}

}  // namespace rismc::barrier
