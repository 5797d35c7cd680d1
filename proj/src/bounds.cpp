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

#include "rismc/bounds.hpp"

#include <cmath>
#include <limits>

#include "rismc/errors.hpp"
#include "rismc/objective.hpp"
#include "rismc/rng.hpp"

namespace rismc::bounds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Parts {
  double coherent;  // N beta + sqrt(beta)
  double diffuse;   // (1 - beta^2) N + 1/(B+1)
};

Parts parts(int N, const RicianFactor& B) {
  if (N < 1) throw DomainError("moment: N must be >= 1");
  const double beta = B.los_fraction();
  return {N * beta + std::sqrt(beta), (1.0 - beta * beta) * N + B.nlos_fraction()};
}

}  // namespace

double a_moment(int N, const RicianFactor& B) {
  const Parts p = parts(N, B);
  return p.coherent * p.coherent + p.diffuse;
}

double d_moment(int N, const RicianFactor& B) {
  const Parts p = parts(N, B);
  return 4.0 * p.diffuse * p.coherent * p.coherent + 2.0 * p.diffuse * p.diffuse;
}

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::upper_MN: return "upper_MN";
    case CurveKind::lower_MN: return "lower_MN";
    case CurveKind::k_decay: return "k_decay";
    case CurveKind::k_decay_statement: return "k_decay_statement";
    case CurveKind::km_lower: return "km_lower";
    case CurveKind::km_upper: return "km_upper";
  }
  return "unknown";
}

CurveKind curve_kind_from_string(const std::string& s) {
  for (CurveKind k : {CurveKind::upper_MN, CurveKind::lower_MN, CurveKind::k_decay, CurveKind::k_decay_statement,
                      CurveKind::km_lower, CurveKind::km_upper})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown bound curve kind: " + s);
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::N: return "N";
    case Axis::M: return "M";
    case Axis::K: return "K";
    case Axis::K_equals_M: return "K_equals_M";
    case Axis::p_max: return "p_max";
  }
  return "unknown";
}

Axis axis_from_string(const std::string& s) {
  for (Axis a : {Axis::N, Axis::M, Axis::K, Axis::K_equals_M, Axis::p_max})
    if (to_string(a) == s) return a;
  throw ConfigError("unknown bound axis: " + s);
}

double bound_value(CurveKind kind, const CurveParams& p) {
  if (p.M < 1 || p.N < 1 || p.K < 1 || !(p.p_max > 0.0)) return kNaN;
  const double A = a_moment(p.N, p.B);
  const double M = p.M, N = p.N, K = p.K, P = p.p_max;
  switch (kind) {
    case CurveKind::upper_MN: return bits(P * M * A);
    case CurveKind::lower_MN: return bits(P * M * A / (K * K));
    case CurveKind::k_decay: return bits(P / (N * std::pow(K, 1.0 / (M * A))));
    case CurveKind::k_decay_statement: return bits(P / (N * std::pow(K, 1.0 / (N * N * M))));
    case CurveKind::km_lower: {
      if (!(p.l > 0.0) || !(p.l < A)) return kNaN;
      const double D = d_moment(p.N, p.B);
      return std::exp(-K * D / (M * (A - p.l) * (A - p.l))) * bits(p.l * P);
    }
    case CurveKind::km_upper: {
      const double r = 1.0 + std::sqrt(M / K);
      return bits(P * A * r * r);
    }
  }
  return kNaN;
}

AsymptoticCurve bound_curves(CurveKind kind, const CurveParams& params, Axis axis,
                             const std::vector<double>& axis_values) {
  AsymptoticCurve c;
  c.kind = kind;
  c.params = params;
  c.axis = axis;
  c.axis_values = axis_values;
  for (double v : axis_values) {
    CurveParams p = params;
    const int iv = static_cast<int>(std::lround(v));
    switch (axis) {
      case Axis::N: p.N = iv; break;
      case Axis::M: p.M = iv; break;
      case Axis::K: p.K = iv; break;
      case Axis::K_equals_M: p.K = p.M = iv; break;
      case Axis::p_max: p.p_max = v; break;
    }
    const double y = bound_value(kind, p);
    if (std::isnan(y)) c.warnings.push_back("parameters outside the formula domain at axis value " + std::to_string(v));
    c.values.push_back(y);
  }
  return c;
}

double aligned_gain_sample(const SystemDims& dims, const RicianFactor& B, std::uint64_t trial_seed) {
  SystemDims d = dims;
  d.K = 1;
  CounterRng angle_rng(trial_seed, 0x616e67ULL);
  LinkAngles angles = LinkAngles::random(1, angle_rng);
  angles.bs_to_user[0] = angles.bs_to_ris;
  RicianParams params;
  params.B = B;
  params.d_over_lambda = 1.0;
  params.angles = angles;
  params.seed = trial_seed;
  const ChannelRealization ch = sample_channels(d, params);

  // Line-of-sight phase of h_n * H_n,m divided by the common BS factor.
  const CVector aN_ris = ura_response(d.N1, d.N2, angles.ris_from_bs.omega, angles.ris_from_bs.vartheta, 1.0);
  const CVector aN_user = ura_response(d.N1, d.N2, angles.ris_to_user[0].omega, angles.ris_to_user[0].vartheta, 1.0);
  RVector theta(d.N);
  for (int n = 0; n < d.N; ++n) theta(n) = -std::arg(aN_user(n) * aN_ris(n));
  const CRowVector g = effective_channel(PhaseConfig(theta), ch, 0);
  return g.squaredNorm();
}

MomentReport verify_moments(const SystemDims& dims, const RicianFactor& B, int trials, std::uint64_t seed,
                            bool parallel) {
  dims.validate();
  if (trials < 2) throw DomainError("verify_moments: at least two trials required");
  std::vector<double> samples(trials);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < trials; ++i)
    samples[i] = aligned_gain_sample(dims, B, derive_seed(seed, {static_cast<std::uint64_t>(i)}));

  MomentReport r;
  r.M = dims.M;
  r.N = dims.N;
  r.B = B;
  r.trials = trials;
  double sum = 0.0;
  for (double s : samples) sum += s;
  r.mean = sum / trials;
  double m2 = 0.0, m4 = 0.0;
  for (double s : samples) {
    const double d = s - r.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  r.variance = m2 / (trials - 1);
  const double n = trials;
  r.mean_stderr = std::sqrt(r.variance / n);
  // Standard error of the sample variance from the fourth central moment.
  const double mu4 = m4 / n;
  const double s2 = m2 / n;
  r.variance_stderr = std::sqrt(std::max(0.0, (mu4 - (n - 3.0) / (n - 1.0) * s2 * s2) / n));
  r.expected_mean = dims.M * a_moment(dims.N, B);
  r.expected_variance = dims.M * d_moment(dims.N, B);
  const double tol_zero = 1e-12 * r.expected_mean;
  r.zero_variance = std::sqrt(r.variance) <= tol_zero;
  if (r.zero_variance) {
    r.mean_pass = std::fabs(r.mean - r.expected_mean) <= 1e-9 * r.expected_mean;
  } else if (r.mean_stderr > 0.0) {
    r.mean_z = (r.mean - r.expected_mean) / r.mean_stderr;
    r.mean_pass = std::fabs(r.mean_z) <= 3.0;
  } else {
    r.mean_pass = std::fabs(r.mean - r.expected_mean) <= 1e-9 * r.expected_mean;
  }
  r.variance_pass = r.variance_stderr > 0.0
                        ? std::fabs(r.variance - r.expected_variance) <= 3.0 * r.variance_stderr
                        : std::fabs(r.variance - r.expected_variance) <= 1e-9 * std::max(1.0, r.expected_variance);
  return r;
}

}  // namespace rismc::bounds
