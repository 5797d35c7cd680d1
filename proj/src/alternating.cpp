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

#include "rismc/alternating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

namespace rismc::alternating {

namespace {

struct Candidate {
  RVector theta;
  double gamma = 0.0;
};

bool lex_less(const RVector& a, const RVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Higher gamma wins; near-ties go to the lexicographically smaller theta.
bool better(const Candidate& a, const Candidate& b) {
  const double tol = 1e-12 * std::max(1.0, std::max(a.gamma, b.gamma));
  if (a.gamma > b.gamma + tol) return true;
  if (b.gamma > a.gamma + tol) return false;
  return lex_less(a.theta, b.theta);
}

RVector wrapped(RVector th) {
  for (Eigen::Index i = 0; i < th.size(); ++i) th(i) = wrap_angle(th(i));
  return th;
}

std::vector<double> snrs_at(const CMatrix& Q, const ChannelRealization& ch, const RVector& theta) {
  return all_snrs(Q, PhaseConfig(theta), ch);
}

double gamma_at(const CMatrix& Q, const ChannelRealization& ch, const RVector& theta) {
  return min_snr(Q, PhaseConfig(theta), ch);
}

/// Gradient ascent on the log-sum-exp soft minimum of snr_k / scale with
/// the temperature raised 10 -> 100 -> 1000.
RVector softmin_ascent(const CMatrix& Q, const ChannelRealization& ch, RVector theta) {
  const int K = ch.K();
  double scale = 0.0;
  for (double s : snrs_at(Q, ch, theta)) scale = std::max(scale, s);
  if (!(scale > 0.0)) return theta;
  auto value_grad = [&](const RVector& th, double tau, RVector* grad) {
    const PhaseConfig ph(th);
    std::vector<double> s(K);
    double smin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      s[k] = snr(Q, ph, ch, k) / scale;
      smin = std::min(smin, s[k]);
    }
    double z = 0.0;
    std::vector<double> w(K);
    for (int k = 0; k < K; ++k) {
      w[k] = std::exp(-tau * (s[k] - smin));
      z += w[k];
    }
    if (grad) {
      grad->setZero(th.size());
      for (int k = 0; k < K; ++k)
        if (w[k] > 1e-300) *grad += (w[k] / z / scale) * snr_theta_gradient(Q, ph, ch, k);
    }
    return smin - std::log(z) / tau;
  };
  RVector g;
  for (double tau : {10.0, 100.0, 1000.0}) {
    double step = 1.0;
    double f = value_grad(theta, tau, &g);
    for (int it = 0; it < 300; ++it) {
      const double g2 = g.squaredNorm();
      if (g2 < 1e-24) break;
      bool accepted = false;
      while (step > 1e-12) {
        const RVector trial = theta + step * g;
        RVector g_new;
        const double f_new = value_grad(trial, tau, &g_new);
        if (f_new >= f + 1e-4 * step * g2) {
          theta = trial;
          f = f_new;
          g = g_new;
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      if (step * g.norm() < 1e-12) break;
    }
  }
  return wrapped(theta);
}

void project_simplex(RVector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, tau = 0.0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    const double t = (css - 1.0) / (i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  for (int i = 0; i < n; ++i) v(i) = std::max(0.0, v(i) - tau);
}

}  // namespace

void AlternatingConfig::validate() const {
  if (J < 1) throw DomainError("AlternatingConfig: J must be >= 1");
  if (!(delta > 0.0)) throw DomainError("AlternatingConfig: delta must be > 0");
  if (max_outer < 1) throw DomainError("AlternatingConfig: max_outer must be >= 1");
  if (krawczyk_max_N < 0 || krawczyk_max_boxes < 1) throw DomainError("AlternatingConfig: invalid Krawczyk limits");
  if (multistart_restarts < 0 || polish_candidates < 0 || polish_max_lps < 0) throw DomainError("AlternatingConfig: negative counts");
}

bool AlternatingConfig::use_krawczyk(int N) const {
  switch (theta_method) {
    case ThetaMethod::krawczyk: return true;
    case ThetaMethod::multistart: return false;
    case ThetaMethod::automatic: return N <= krawczyk_max_N;
  }
  return false;
}

QStep q_step(const PhaseConfig& phase, const ChannelRealization& ch, double p_max, const sdp::Options& opt) {
  std::vector<CMatrix> R;
  R.reserve(ch.K());
  for (int k = 0; k < ch.K(); ++k) R.push_back(user_gram(phase, ch, k));
  const sdp::MaxMinResult res = sdp::maxmin_q_step(R, p_max, opt);
  return {res.Q, res.gamma};
}

KktSystem build_kkt(const TransmitCovariance& Q, const ChannelRealization& ch, const RVector& lambda) {
  const int K = ch.K();
  const int N = ch.N();
  if (lambda.size() != K) throw DomainError("build_kkt: lambda must have K entries");
  if (lambda.minCoeff() < -1e-12 || std::fabs(lambda.sum() - 1.0) > 1e-9)
    throw DomainError("build_kkt: lambda must lie on the probability simplex");
  KktSystem sys;
  sys.lambda = lambda;
  CMatrix B = CMatrix::Zero(N, N);
  CVector C = CVector::Zero(N);
  for (int k = 0; k < K; ++k) {
    sys.per_user.push_back(trig_expansion(Q, ch, k));
    const TrigExpansion& te = sys.per_user.back();
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) B(i, j) += lambda(k) * std::polar(te.b(i, j), te.psi(i, j));
      C(i) += lambda(k) * std::polar(te.c(i), te.omega(i));
    }
  }
  TrigSystem& ts = sys.system;
  ts.b = RMatrix::Zero(N, N);
  ts.psi = RMatrix::Zero(N, N);
  ts.c = RVector(N);
  ts.omega = RVector(N);
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      ts.b(i, j) = ts.b(j, i) = 2.0 * std::abs(B(i, j));
      ts.psi(i, j) = std::arg(B(i, j));
      ts.psi(j, i) = -ts.psi(i, j);
    }
    ts.c(i) = 2.0 * std::abs(C(i));
    ts.omega(i) = std::arg(C(i));
  }
  return sys;
}

RVector polish_maxmin(const CMatrix& Q, const ChannelRealization& ch, const RVector& theta0, int max_lps) {
  const int N = ch.N();
  const int K = ch.K();
  RVector theta = theta0;
  std::vector<double> s = snrs_at(Q, ch, theta);
  double scale = *std::max_element(s.begin(), s.end());
  if (!(scale > 0.0)) return theta;
  double gamma = *std::min_element(s.begin(), s.end());
  double radius = 0.1;
  sdp::Options opt;
  opt.tol = 1e-10;
  for (int it = 0; it < max_lps && radius > 1e-9; ++it) {
    // maximize z s.t. z <= s_k + grad_k . d, |d_i| <= radius (scaled by 1/scale)
    scale = *std::max_element(s.begin(), s.end());
    const PhaseConfig ph(theta);
    sdp::ConicProblem lp;
    lp.num_vars = N + 1;
    lp.c = RVector::Zero(N + 1);
    lp.c(N) = -1.0;
    for (int k = 0; k < K; ++k) {
      RVector a(N + 1);
      a.head(N) = -snr_theta_gradient(Q, ph, ch, k) / scale;
      a(N) = 1.0;
      lp.linear.push_back({a, s[k] / scale});
    }
    for (int i = 0; i < N; ++i) {
      RVector a = RVector::Zero(N + 1);
      a(i) = 1.0;
      lp.linear.push_back({a, radius});
      a(i) = -1.0;
      lp.linear.push_back({a, radius});
    }
    lp.x0 = RVector::Zero(N + 1);
    lp.x0(N) = gamma / scale - 1.0;
    const sdp::ConicSolution sol = sdp::solve(lp, opt);
    const double predicted = (-sol.objective) - gamma / scale;
    if (!(predicted > 1e-13)) break;
    const RVector trial = wrapped(theta + sol.x.head(N));
    const std::vector<double> s_new = snrs_at(Q, ch, trial);
    const double g_new = *std::min_element(s_new.begin(), s_new.end());
    const double ratio = (g_new - gamma) / scale / predicted;
    if (ratio > 0.0 && g_new > gamma) {
      theta = trial;
      s = s_new;
      gamma = g_new;
      if (ratio > 0.75 && sol.x.head(N).cwiseAbs().maxCoeff() > 0.9 * radius) radius *= 2.0;
      else if (ratio < 0.25) radius *= 0.25;
    } else {
      radius *= 0.25;
    }
  }
  return theta;
}

double kkt_residual(const CMatrix& Q, const ChannelRealization& ch, const RVector& theta, double active_tol) {
  const PhaseConfig ph(theta);
  const std::vector<double> s = all_snrs(Q, ph, ch);
  const double gmin = *std::min_element(s.begin(), s.end());
  if (!(gmin > 0.0)) return 0.0;
  std::vector<RVector> grads;
  for (int k = 0; k < ch.K(); ++k)
    if (s[k] <= gmin * (1.0 + active_tol)) grads.push_back(snr_theta_gradient(Q, ph, ch, k) / gmin);
  const int A = static_cast<int>(grads.size());
  RMatrix G(ch.N(), A);
  for (int a = 0; a < A; ++a) G.col(a) = grads[a];
  // min over the simplex of |G lambda|^2 by projected gradient.
  RVector lambda = RVector::Constant(A, 1.0 / A);
  const RMatrix GtG = G.transpose() * G;
  const double L = std::max(GtG.norm(), 1e-300);
  for (int it = 0; it < 5000; ++it) {
    RVector next = lambda - (GtG * lambda) / L;
    project_simplex(next);
    if ((next - lambda).norm() < 1e-15) break;
    lambda = next;
  }
  return (G * lambda).norm();
}

ThetaStep theta_step(const TransmitCovariance& Q, const ChannelRealization& ch, const RVector& theta_init,
                     const AlternatingConfig& cfg, std::uint64_t seed) {
  const int N = ch.N();
  const int K = ch.K();
  if (theta_init.size() != N) throw DimensionError("theta_step: theta_init length must equal N");
  ThetaStep out;
  const RVector init = wrapped(theta_init);
  const Candidate start{init, gamma_at(Q.Q, ch, init)};
  std::vector<Candidate> cands;

  if (cfg.use_krawczyk(N)) {
    std::vector<RVector> lambdas;
    for (int k = 0; k < K; ++k) lambdas.push_back(RVector::Unit(K, k));
    if (K > 1) lambdas.push_back(RVector::Constant(K, 1.0 / K));
    KrawczykOptions kopt;
    kopt.max_boxes = cfg.krawczyk_max_boxes;
    for (const RVector& lambda : lambdas) {
      const KktSystem sys = build_kkt(Q, ch, lambda);
      const KrawczykResult kr = krawczyk_solve(sys.system, kopt);
      out.partial = out.partial || kr.partial;
      out.degenerate = out.degenerate || kr.degenerate;
      for (const RVector& root : kr.roots) cands.push_back({root, gamma_at(Q.Q, ch, root)});
    }
  } else {
    CounterRng rng(seed);
    std::vector<RVector> starts{init};
    for (int r = 0; r < cfg.multistart_restarts; ++r) {
      RVector th(N);
      for (int n = 0; n < N; ++n) th(n) = rng.uniform_angle();
      starts.push_back(th);
    }
    for (const RVector& th0 : starts) {
      const RVector th = softmin_ascent(Q.Q, ch, th0);
      cands.push_back({th, gamma_at(Q.Q, ch, th)});
    }
  }
  out.candidates = static_cast<int>(cands.size());

  std::sort(cands.begin(), cands.end(), better);
  const int polish = std::min<int>(cfg.polish_candidates, static_cast<int>(cands.size()));
  for (int i = 0; i < polish; ++i) {
    cands[i].theta = polish_maxmin(Q.Q, ch, cands[i].theta, cfg.polish_max_lps);
    cands[i].gamma = gamma_at(Q.Q, ch, cands[i].theta);
  }
  Candidate best = start;
  {
    // Local refinement of the incoming point too, so the step never loses
    // ground it could have kept.
    Candidate refined{polish_maxmin(Q.Q, ch, init, cfg.polish_max_lps), 0.0};
    refined.gamma = gamma_at(Q.Q, ch, refined.theta);
    if (refined.gamma > best.gamma) best = refined;
  }
  for (const Candidate& c : cands)
    if (better(c, best)) best = c;
  if (best.gamma < start.gamma) best = start;
  out.phase = PhaseConfig(best.theta);
  out.gamma = best.gamma;
  return out;
}

SolveReport solve(const ChannelRealization& ch, double p_max, const AlternatingConfig& cfg) {
  cfg.validate();
  ch.validate();
  if (!(p_max > 0.0)) throw DomainError("alternating: p_max must be > 0");
  const int N = ch.N();

  std::vector<RVector> inits;
  CounterRng rng(derive_seed(cfg.seed, {0x616c74ULL}));
  for (int j = 0; j < cfg.J; ++j) {
    RVector th(N);
    for (int n = 0; n < N; ++n) th(n) = rng.uniform_angle();
    inits.push_back(th);
  }
  for (const RVector& th : cfg.extra_inits) {
    if (th.size() != N) throw DimensionError("alternating: extra init length must equal N");
    inits.push_back(wrapped(th));
  }

  SolveReport best;
  best.method = "alternating";
  bool have_best = false;
  int total_iterations = 0;
  for (int j = 0; j < static_cast<int>(inits.size()); ++j) {
    PhaseConfig phase(inits[j]);
    QStep qs = q_step(phase, ch, p_max, cfg.sdp);
    std::vector<double> trace{qs.gamma};
    SolveStatus status = SolveStatus::max_iterations;
    std::vector<std::string> warnings;
    int it = 0;
    for (; it < cfg.max_outer; ++it) {
      const ThetaStep ts = theta_step(qs.Q, ch, phase.theta(), cfg, derive_seed(cfg.seed, {0x7468ULL, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(it)}));
      if (ts.partial) warnings.push_back("krawczyk box budget exhausted");
      phase = ts.phase;
      QStep next = q_step(phase, ch, p_max, cfg.sdp);
      // The covariance solve is optimal only to its tolerance; keep the
      // previous Q when it is still at least as good at the new phases.
      const double keep = min_snr(qs.Q.Q, phase, ch);
      if (keep > next.gamma) next = {qs.Q, keep};
      const double prev = trace.back();
      trace.push_back(next.gamma);
      qs = std::move(next);
      if (std::fabs(qs.gamma - prev) <= cfg.delta * std::max(1.0, qs.gamma)) {
        status = SolveStatus::converged;
        ++it;
        break;
      }
    }
    total_iterations += it;
    SolveReport rep;
    rep.method = "alternating";
    rep.Q = qs.Q;
    rep.phase = phase;
    rep.iterations = it;
    rep.status = status;
    rep.trace = std::move(trace);
    rep.init_index = j;
    rep.warnings = std::move(warnings);
    rep.evaluate(ch);
    if (!have_best || rep.gamma > best.gamma * (1.0 + 1e-12) + 1e-300) {
      best = std::move(rep);
      have_best = true;
    }
  }
  best.iterations = total_iterations;
  best.trace_breaks = {0};
  return best;
}

}  // namespace rismc::alternating
