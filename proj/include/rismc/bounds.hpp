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
#include <string>
#include <vector>

#include "rismc/model.hpp"

namespace rismc::bounds {

/// Mean per-antenna power of the phase-aligned combined channel:
/// (N beta + sqrt(beta))^2 + N (1 - beta^2) + 1/(B+1), beta = B/(B+1).
double a_moment(int N, const RicianFactor& B);

/// Companion spread term
/// 4 ((1 - beta^2) N + 1/(B+1)) (N beta + sqrt(beta))^2 + 2 ((1 - beta^2) N + 1/(B+1))^2.
double d_moment(int N, const RicianFactor& B);

enum class CurveKind {
  upper_MN,           // log2(1 + P M A)
  lower_MN,           // log2(1 + P M A / K^2)
  k_decay,            // log2(1 + P / (N K^(1/(M A))))
  k_decay_statement,  // log2(1 + P / (N K^(1/(N^2 M))))
  km_lower,           // exp(-K D / (M (A - l)^2)) log2(1 + l P), needs l < A
  km_upper,           // log2(1 + P A (1 + sqrt(M/K))^2)
};

std::string to_string(CurveKind kind);
CurveKind curve_kind_from_string(const std::string& s);

struct CurveParams {
  int M = 1;
  int N = 1;
  int K = 1;
  RicianFactor B = RicianFactor::finite(1.0);
  double p_max = 1.0;
  double l = 0.0;
};

/// Axis along which a curve is evaluated.
enum class Axis { N, M, K, K_equals_M, p_max };
std::string to_string(Axis axis);
Axis axis_from_string(const std::string& s);

/// Single evaluation in bits; NaN when the parameters leave the formula's domain.
double bound_value(CurveKind kind, const CurveParams& params);

struct AsymptoticCurve {
  CurveKind kind = CurveKind::upper_MN;
  CurveParams params;
  Axis axis = Axis::N;
  std::vector<double> axis_values;
  std::vector<double> values;
  std::vector<std::string> warnings;
};

AsymptoticCurve bound_curves(CurveKind kind, const CurveParams& params, Axis axis,
                             const std::vector<double>& axis_values);

struct MomentReport {
  int M = 0;
  int N = 0;
  RicianFactor B = RicianFactor::finite(0.0);
  int trials = 0;
  double mean = 0.0;
  double variance = 0.0;       // sample variance of |g|^2
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  double expected_mean = 0.0;      // M * A
  double expected_variance = 0.0;  // M * D
  double mean_z = 0.0;
  bool mean_pass = false;      // |mean - M A| <= 3 stderr
  bool variance_pass = false;  // |variance - M D| <= 3 stderr
  /// Pure line of sight: sample spread vanishes up to rounding.
  bool zero_variance = false;
};

/// Monte-Carlo check of E|u^H G H + t^H|^2 = M A with u aligned to the
/// line-of-sight phases and the BS departure direction shared between the
/// BS-RIS and the direct link. Trials run in parallel when `parallel` is
/// set; the result is bit-identical either way.
MomentReport verify_moments(const SystemDims& dims, const RicianFactor& B, int trials, std::uint64_t seed,
                            bool parallel = true);

/// |g|^2 for one aligned draw (exposed for testing and benchmarking).
double aligned_gain_sample(const SystemDims& dims, const RicianFactor& B, std::uint64_t trial_seed);

}  // namespace rismc::bounds
