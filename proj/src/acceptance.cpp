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

#include "rismc/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "rismc/alternating.hpp"
#include "rismc/barrier_solver.hpp"
#include "rismc/baselines.hpp"
#include "rismc/bounds.hpp"
#include "rismc/harness.hpp"
#include "rismc/model.hpp"
#include "rismc/objective.hpp"
#include "rismc/rng.hpp"
#include "rismc/robust.hpp"
#include "rismc/special_case.hpp"

namespace rismc::acceptance {

namespace {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

ChannelRealization random_instance(int M, int N, int K, std::uint64_t seed, double B = 1.0) {
  RicianParams p;
  p.B = RicianFactor::finite(B);
  p.seed = seed;
  return sample_channels(SystemDims::make(M, N, K), p);
}

CMatrix random_psd(int M, double trace, CounterRng& rng) {
  CMatrix A(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) A(i, j) = rng.complex_gaussian();
  CMatrix Q = A * A.adjoint() + 0.1 * CMatrix::Identity(M, M);
  return Q * (trace / Q.trace().real());
}

/// Settings for the large Monte-Carlo sweeps: one random start, two soft-min
/// restarts and short local refinements keep single-core runs tractable.
alternating::AlternatingConfig sweep_alternating() {
  alternating::AlternatingConfig cfg;
  cfg.J = 1;
  cfg.theta_method = alternating::ThetaMethod::multistart;
  cfg.multistart_restarts = 2;
  cfg.polish_candidates = 1;
  cfg.polish_max_lps = 20;
  return cfg;
}

bool alternating_trace_monotone(const SolveReport& r, double* worst_drop) {
  bool ok = true;
  std::size_t seg = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    while (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) < i) ++seg;
    if (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) == i) continue;
    const double drop = r.trace[i - 1] - r.trace[i];
    if (drop > 1e-9 * std::max(1.0, std::fabs(r.trace[i - 1]))) ok = false;
    *worst_drop = std::max(*worst_drop, drop);
  }
  return ok;
}

bool barrier_trace_decreasing(const SolveReport& r, double* worst_rise) {
  bool ok = true;
  std::size_t seg = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    while (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) < i) ++seg;
    if (seg < r.trace_breaks.size() && static_cast<std::size_t>(r.trace_breaks[seg]) == i) continue;
    const double rise = r.trace[i] - r.trace[i - 1];
    if (rise > 0.0) ok = false;
    *worst_rise = std::max(*worst_rise, rise);
  }
  return ok;
}

// 1. Barrier descent directions against central differences of Gamma.
CriterionResult gradient_fidelity(const Options& opt) {
  CriterionResult res{1, "gradient fidelity", false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(derive_seed(opt.seed, {1}));
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const int M = 1 + static_cast<int>(rng.uniform() * 3), N = 1 + static_cast<int>(rng.uniform() * 3);
    const int K = 1 + static_cast<int>(rng.uniform() * 3);
    const ChannelRealization ch = random_instance(M, N, K, derive_seed(opt.seed, {1, 1000u + inst}));
    barrier::BarrierState s;
    const double P = 2.0;
    s.Q = {random_psd(M, 0.5 * P, rng), P};
    s.theta = RVector(N);
    for (int n = 0; n < N; ++n) s.theta(n) = rng.uniform_angle();
    s.gamma = 0.5 * min_snr(s.Q.Q, PhaseConfig(s.theta), ch);
    s.t = 1.0 + 4.0 * rng.uniform();
    const barrier::Direction d = barrier::gradients(s, ch);

    std::vector<double> analytic, numeric;
    auto neg_gamma = [&](const barrier::BarrierState& x) { return -barrier::barrier_value(x, ch); };
    const double hq = 1e-6 * std::max(1.0, s.Q.Q.norm());
    auto probe_q = [&](const CMatrix& E) {
      barrier::BarrierState a = s, b = s;
      a.Q.Q += hq * E;
      b.Q.Q -= hq * E;
      numeric.push_back((neg_gamma(a) - neg_gamma(b)) / (2.0 * hq));
      analytic.push_back((d.dQ * E).trace().real());
    };
    for (int i = 0; i < M; ++i) {
      CMatrix E = CMatrix::Zero(M, M);
      E(i, i) = 1.0;
      probe_q(E);
      for (int j = i + 1; j < M; ++j) {
        CMatrix R = CMatrix::Zero(M, M), I = CMatrix::Zero(M, M);
        R(i, j) = R(j, i) = 1.0;
        I(i, j) = Complex(0.0, 1.0);
        I(j, i) = Complex(0.0, -1.0);
        probe_q(R);
        probe_q(I);
      }
    }
    const double ht = 1e-6;
    for (int n = 0; n < N; ++n) {
      barrier::BarrierState a = s, b = s;
      a.theta(n) += ht;
      b.theta(n) -= ht;
      numeric.push_back((neg_gamma(a) - neg_gamma(b)) / (2.0 * ht));
      analytic.push_back(d.dtheta(n));
    }
    {
      const double hg = 1e-6 * std::max(1e-3, std::fabs(s.gamma));
      barrier::BarrierState a = s, b = s;
      a.gamma += hg;
      b.gamma -= hg;
      numeric.push_back((neg_gamma(a) - neg_gamma(b)) / (2.0 * hg));
      analytic.push_back(d.dgamma);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      num += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      den += numeric[i] * numeric[i];
    }
    worst = std::max(worst, std::sqrt(num / std::max(den, 1e-300)));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.pass = worst <= 1e-5 && res.seconds < 10.0;
  res.detail = fmt("max relative error %.2e (tol 1e-05) over 50 instances, %.2f s (limit 10 s)", worst, res.seconds);
  return res;
}

// 2. Trigonometric expansion against the direct quadratic form.
CriterionResult trig_identity(const Options& opt) {
  CriterionResult res{2, "trigonometric expansion identity", false, "", 0.0};
  CounterRng rng(derive_seed(opt.seed, {2}));
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const int M = 1 + static_cast<int>(rng.uniform() * 4), N = 1 + static_cast<int>(rng.uniform() * 4);
    const int K = 1 + static_cast<int>(rng.uniform() * 3);
    const ChannelRealization ch = random_instance(M, N, K, derive_seed(opt.seed, {2, 1000u + inst}));
    const TransmitCovariance Q{random_psd(M, 1.0, rng), 1.0};
    std::vector<TrigExpansion> ex;
    for (int k = 0; k < K; ++k) ex.push_back(trig_expansion(Q, ch, k));
    for (int rep = 0; rep < 100; ++rep) {
      RVector th(N);
      for (int n = 0; n < N; ++n) th(n) = rng.uniform_angle();
      const PhaseConfig ph(th);
      for (int k = 0; k < K; ++k) {
        const double direct = snr(Q.Q, ph, ch, k);
        const double expanded = ex[k].evaluate(th);
        worst = std::max(worst, std::fabs(expanded - direct) / std::max(std::fabs(direct), 1e-6 * ex[k].a));
      }
    }
  }
  res.pass = worst <= 1e-9;
  res.detail = fmt("max relative error %.2e (tol 1e-09) at 100 phases x 50 instances", worst);
  return res;
}

// 3. Single-user capacity against log2(1 + P |g|^2) at the optimal phases.
CriterionResult closed_form(const Options& opt) {
  CriterionResult res{3, "single-user closed form", false, "", 0.0};
  const double P = 10.0;
  double worst = 0.0, worst_m1 = 0.0;
  int count = 0;
  const int dims[][2] = {{1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}};
  for (int inst = 0; inst < 8; ++inst) {
    const int M = dims[inst][0], N = dims[inst][1];
    const ChannelRealization ch = random_instance(M, N, 1, derive_seed(opt.seed, {3, 1000u + inst}));
    double oracle;
    if (M == 1) {
      // Aligned phases: every reflected term in phase with the direct link.
      Complex g = std::conj(ch.t[0](0));
      double aligned = std::abs(g);
      for (int n = 0; n < N; ++n) aligned += std::abs(ch.h[0](n) * ch.H(n, 0));
      oracle = bits(P * aligned * aligned);
      const RVector th = special::single_antenna_phases(ch, 0);
      const double closed = bits(P * effective_channel(PhaseConfig(th), ch, 0).squaredNorm());
      worst_m1 = std::max(worst_m1, std::fabs(closed - oracle));
    } else {
      special::P3Options po;
      po.seed = derive_seed(opt.seed, {3, 2000u + inst});
      const special::P3Result p3 = special::solve_p3(ch, 0, po);
      oracle = bits(P * p3.gain);
    }
    barrier::BarrierConfig bc;
    bc.restarts = 4;
    bc.seed = derive_seed(opt.seed, {3, 3000u + inst});
    const SolveReport rb = barrier::solve(ch, P, bc);
    alternating::AlternatingConfig ac;
    ac.J = 4;
    ac.seed = derive_seed(opt.seed, {3, 4000u + inst});
    const SolveReport ra = alternating::solve(ch, P, ac);
    worst = std::max({worst, std::fabs(rb.capacity_bits - oracle), std::fabs(ra.capacity_bits - oracle)});
    ++count;
  }
  res.pass = worst <= 1e-3 && worst_m1 <= 1e-3;
  res.detail = fmt("max |capacity - oracle| %.2e bits (tol 1e-03) over %d instances; M=1 closed-form gap %.2e", worst,
                   count, worst_m1);
  return res;
}

// 4. Alternating optimization against exhaustive search.
CriterionResult brute_force_equivalence(const Options& opt) {
  CriterionResult res{4, "brute-force equivalence", false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(derive_seed(opt.seed, {4}));
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int inst = 0; inst < 20; ++inst) {
    const int N = 2 + static_cast<int>(rng.uniform() * 2), K = 2 + static_cast<int>(rng.uniform() * 2);
    const ChannelRealization ch = random_instance(1, N, K, derive_seed(opt.seed, {4, 1000u + inst}));
    const baselines::BruteForceResult bf = baselines::brute_force(ch, 1.0, baselines::GridSpec{});
    alternating::AlternatingConfig ac;
    ac.seed = derive_seed(opt.seed, {4, 2000u + inst});
    const SolveReport ra = alternating::solve(ch, 1.0, ac);
    worst_ratio = std::min(worst_ratio, ra.capacity_bits / bf.report.capacity_bits);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.pass = worst_ratio >= 0.98 && res.seconds < 300.0;
  res.detail = fmt("min alternating/brute-force ratio %.4f (need >= 0.98) over 20 instances, %.1f s (limit 300 s)",
                   worst_ratio, res.seconds);
  return res;
}

// 5. Monotone traces of both solvers.
CriterionResult monotonicity(const Options& opt) {
  CriterionResult res{5, "solver monotonicity", false, "", 0.0};
  CounterRng rng(derive_seed(opt.seed, {5}));
  bool ok = true;
  double drop = 0.0, rise = -std::numeric_limits<double>::infinity();
  int solved = 0;
  for (int inst = 0; inst < 12; ++inst) {
    const int M = 1 + static_cast<int>(rng.uniform() * 3), N = 1 + static_cast<int>(rng.uniform() * 3);
    const int K = 1 + static_cast<int>(rng.uniform() * 3);
    const ChannelRealization ch = random_instance(M, N, K, derive_seed(opt.seed, {5, 1000u + inst}));
    alternating::AlternatingConfig ac;
    ac.J = 4;
    ac.seed = derive_seed(opt.seed, {5, 2000u + inst});
    const SolveReport ra = alternating::solve(ch, 10.0, ac);
    barrier::BarrierConfig bc;
    bc.seed = derive_seed(opt.seed, {5, 3000u + inst});
    const SolveReport rb = barrier::solve(ch, 10.0, bc);
    ok = alternating_trace_monotone(ra, &drop) && ok;
    ok = barrier_trace_decreasing(rb, &rise) && ok;
    solved += 2;
  }
  res.pass = ok;
  res.detail = fmt("%d solves; largest gamma drop %.2e (tol 1e-09 relative), largest barrier rise %.2e (must be <= 0)",
                   solved, drop, rise);
  return res;
}

// 6. Moments of the aligned combined channel.
CriterionResult moments(const Options& opt) {
  CriterionResult res{6, "channel moments", false, "", 0.0};
  bool ok = true;
  double worst_z = 0.0;
  for (int M : {4, 8})
    for (int N : {4, 16})
      for (double B : {0.0, 1.0, 10.0}) {
        const bounds::MomentReport r = bounds::verify_moments(
            SystemDims::make(M, N, 1), RicianFactor::finite(B), 10000,
            derive_seed(opt.seed, {6, static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(N),
                                   static_cast<std::uint64_t>(B)}));
        ok = ok && r.mean_pass;
        worst_z = std::max(worst_z, std::fabs(r.mean_z));
      }
  const bounds::MomentReport los =
      bounds::verify_moments(SystemDims::make(4, 16, 1), RicianFactor::pure_los(), 1000, derive_seed(opt.seed, {6, 99}));
  ok = ok && los.zero_variance && los.mean_pass;
  res.pass = ok;
  res.detail = fmt("max |z| %.2f over 12 (M,N,B) cases (limit 3); pure LoS variance %.1e, zero_variance=%s", worst_z,
                   los.variance, los.zero_variance ? "yes" : "no");
  return res;
}

harness::ExperimentPlan sweep_plan(const Options& opt, std::uint64_t tag, int M, int N, int K, int trials) {
  harness::ExperimentPlan p;
  p.name = "acceptance";
  p.axis = harness::SweepAxis::N;
  p.axis_values = {static_cast<double>(N)};
  p.M = M;
  p.N = N;
  p.K = K;
  p.B = 1.0;
  p.rho_dB = 20.0;
  p.methods = {harness::Method::alternating};
  p.trials = trials;
  p.seed = derive_seed(opt.seed, {tag});
  p.workers = opt.workers;
  p.alternating = sweep_alternating();
  return p;
}

harness::PointSummary single_summary(const harness::ExperimentPlan& plan) {
  return harness::run(plan).summary.at(0);
}

// 7. Growth with N^2 and with M.
CriterionResult scaling_trends(const Options& opt) {
  CriterionResult res{7, "scaling trends", false, "", 0.0};
  const int trials = 200;
  const auto a = single_summary(sweep_plan(opt, 71, 4, 8, 2, trials));
  const auto b = single_summary(sweep_plan(opt, 72, 4, 16, 2, trials));
  const auto c = single_summary(sweep_plan(opt, 73, 8, 8, 2, trials));
  const double gain_n = b.mean - a.mean, gain_m = c.mean - a.mean;
  res.pass = std::fabs(gain_n - 2.0) <= 0.5 && std::fabs(gain_m - 1.0) <= 0.5 && a.count == trials &&
             b.count == trials && c.count == trials;
  res.detail = fmt("N 8->16 gain %.3f bits (2.0 +- 0.5), M 4->8 gain %.3f bits (1.0 +- 0.5), %d trials each", gain_n,
                   gain_m, trials);
  return res;
}

// 8. Decay in K and the spatially-white lower bound.
CriterionResult k_decay(const Options& opt) {
  CriterionResult res{8, "K-decay trend", false, "", 0.0};
  harness::ExperimentPlan p = sweep_plan(opt, 8, 8, 8, 2, 30);
  p.axis = harness::SweepAxis::K;
  p.axis_values = {2, 4, 8, 16};
  const harness::SweepResult r = harness::run(p);
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < r.summary.size(); ++i) {
    const auto& s = r.summary[i];
    bounds::CurveParams cp;
    cp.M = 8;
    cp.N = 8;
    cp.K = static_cast<int>(s.axis_value);
    cp.B = RicianFactor::finite(1.0);
    cp.p_max = p.p_max();
    const double lb = bounds::bound_value(bounds::CurveKind::k_decay, cp);
    if (!(s.mean > lb)) ok = false;
    if (i > 0) {
      const auto& prev = r.summary[i - 1];
      const double se = std::sqrt(s.stderr_mean * s.stderr_mean + prev.stderr_mean * prev.stderr_mean);
      if (s.mean - prev.mean > se) ok = false;
    }
    detail << (i ? "; " : "") << fmt("K=%g mean %.3f se %.3f bound %.3f", s.axis_value, s.mean, s.stderr_mean, lb);
  }
  res.pass = ok;
  res.detail = detail.str() + fmt(" (%d trials per K)", p.trials);
  return res;
}

// 9. Plateau for K = M.
CriterionResult ratio_plateau(const Options& opt) {
  CriterionResult res{9, "K = M plateau", false, "", 0.0};
  harness::ExperimentPlan p = sweep_plan(opt, 9, 8, 8, 8, 20);
  p.axis = harness::SweepAxis::K_equals_M;
  p.axis_values = {4, 8, 16};
  const harness::SweepResult r = harness::run(p);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool below = true;
  std::ostringstream detail;
  for (const auto& s : r.summary) {
    lo = std::min(lo, s.mean);
    hi = std::max(hi, s.mean);
    bounds::CurveParams cp;
    cp.M = cp.K = static_cast<int>(s.axis_value);
    cp.N = 8;
    cp.B = RicianFactor::finite(1.0);
    cp.p_max = p.p_max();
    const double ub = bounds::bound_value(bounds::CurveKind::km_upper, cp);
    if (!(s.mean <= 1.1 * ub)) below = false;
    detail << fmt("K=M=%g mean %.3f upper %.3f; ", s.axis_value, s.mean, ub);
  }
  const double variation = (hi - lo) / lo;
  res.pass = variation < 0.25 && below;
  res.detail = detail.str() + fmt("variation %.1f%% (limit 25%%), %d trials per point", 100.0 * variation, p.trials);
  return res;
}

// 10. Capacity against beamforming and the direct links alone.
CriterionResult dominance(const Options& opt) {
  CriterionResult res{10, "dominance ordering", false, "", 0.0};
  const int instances = 100;
  const double P = db_to_linear(20.0);
  std::vector<double> cap(instances), beam(instances), direct(instances);
  std::vector<std::string> errors(instances);
#pragma omp parallel for schedule(dynamic) num_threads(opt.workers)
  for (int inst = 0; inst < instances; ++inst) {
    try {
      const ChannelRealization ch = random_instance(4, 4, 4, derive_seed(opt.seed, {10, 1000u + inst}));
      baselines::BeamformingConfig bc;
      bc.seed = derive_seed(opt.seed, {10, 2000u + inst});
      bc.theta = sweep_alternating();
      const baselines::BeamformingResult bf = baselines::beamforming(ch, P, bc);
      alternating::AlternatingConfig ac = sweep_alternating();
      ac.seed = derive_seed(opt.seed, {10, 3000u + inst});
      ac.extra_inits.push_back(bf.phase.theta());
      cap[inst] = alternating::solve(ch, P, ac).capacity_bits;
      beam[inst] = bf.rate_bits;
      direct[inst] = baselines::no_ris(ch, P).capacity_bits;
    } catch (const std::exception& e) {
      errors[inst] = e.what();
    }
  }
  int dominated = 0, above_direct = 0, failed = 0;
  double worst_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    if (!errors[i].empty()) {
      ++failed;
      continue;
    }
    if (cap[i] >= beam[i] - 1e-6) ++dominated;
    if (cap[i] > direct[i]) ++above_direct;
    worst_gap = std::min(worst_gap, cap[i] - beam[i]);
  }
  res.pass = failed == 0 && dominated == instances && above_direct >= 95;
  res.detail = fmt("capacity >= beamforming on %d/%d (min gap %.2e bits, tol 1e-06); capacity > no-RIS on %d/%d "
                   "(need 95)%s",
                   dominated, instances, worst_gap, above_direct, instances,
                   failed ? fmt("; %d solver errors", failed).c_str() : "");
  return res;
}

// 11. Robust design under bounded cascade errors.
CriterionResult robust_baseline(const Options& opt) {
  CriterionResult res{11, "robust baseline", false, "", 0.0};
  const double R = 1.0;
  const std::vector<double> radii{0.0, 0.25, 0.5};
  int feasible = 0, violations = 0, non_monotone = 0;
  double min_rate = std::numeric_limits<double>::infinity();
  const int instances = 8;
  for (int inst = 0; inst < instances; ++inst) {
    const ChannelRealization ch = random_instance(2, 2, 2, derive_seed(opt.seed, {11, 1000u + inst}));
    baselines::RobustConfig cfg;
    cfg.seed = derive_seed(opt.seed, {11, 2000u + inst});
    const std::vector<baselines::RobustResult> prof = baselines::power_profile(ch, R, radii, cfg);
    for (std::size_t i = 1; i < prof.size(); ++i) {
      const bool f_prev = prof[i - 1].status != SolveStatus::infeasible;
      const bool f_cur = prof[i].status != SolveStatus::infeasible;
      if (f_prev && f_cur && prof[i].power < prof[i - 1].power) ++non_monotone;
      if (!f_prev && f_cur) ++non_monotone;
    }
    const baselines::RobustResult& r = prof.back();
    if (r.status == SolveStatus::infeasible) continue;
    ++feasible;
    const baselines::UncertaintyModel model{ch, {0.5, 0.5}, R};
    CounterRng rng(derive_seed(opt.seed, {11, 3000u + inst}));
    for (int draw = 0; draw < 100; ++draw) {
      for (int k = 0; k < 2; ++k) {
        // Uniform in the Frobenius ball: Gaussian direction, radius eps U^(1/dim).
        CMatrix dC(2, 2);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) dC(a, b) = rng.complex_gaussian();
        dC *= 0.5 * std::pow(rng.uniform(), 1.0 / 8.0) / dC.norm();
        const double rate = bits(std::norm(baselines::perturbed_signal(model, r.v, r.phase, k, dC)));
        min_rate = std::min(min_rate, rate);
        if (rate < R - 1e-9) ++violations;
      }
    }
  }
  res.pass = violations == 0 && non_monotone == 0 && feasible > 0;
  res.detail = fmt("%d/%d instances feasible at eps=0.5; min sampled worst rate %.6f bits (target %.1f), %d "
                   "violations; power decreases with eps on %d transitions",
                   feasible, instances, min_rate, R, violations, non_monotone);
  return res;
}

// 12. Replay determinism of the sweep CSV.
CriterionResult determinism(const Options& opt) {
  CriterionResult res{12, "sweep determinism", false, "", 0.0};
  harness::ExperimentPlan p;
  p.name = "replay";
  p.axis = harness::SweepAxis::N;
  p.axis_values = {2, 4};
  p.M = 2;
  p.K = 2;
  p.methods = {harness::Method::alternating, harness::Method::no_ris, harness::Method::bounds};
  p.curves = {bounds::CurveKind::upper_MN};
  p.trials = 3;
  p.seed = derive_seed(opt.seed, {12});
  p.alternating = sweep_alternating();
  p.workers = opt.workers;
  const std::string first = harness::to_csv(harness::run(p).rows, false);
  p.workers = 1;
  const std::string second = harness::to_csv(harness::run(p).rows, false);
  res.pass = first == second && !first.empty();
  res.detail = fmt("%zu bytes, replay %s (workers %d vs 1)", first.size(), first == second ? "identical" : "differs",
                   opt.workers);
  return res;
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  return fmt("%s [%2d] %s: %s (%.1f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
             r.seconds);
}

std::vector<CriterionResult> run(const Options& opt, std::ostream& log) {
  using Fn = CriterionResult (*)(const Options&);
  const Fn table[] = {gradient_fidelity, trig_identity, closed_form, brute_force_equivalence,
                      monotonicity,      moments,       scaling_trends, k_decay,
                      ratio_plateau,     dominance,     robust_baseline, determinism};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 12; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = table[id - 1](opt);
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds == 0.0) r.seconds = elapsed;
    log << format_line(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rismc::acceptance
