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

#include "json.hpp"
#include "rismc/alternating.hpp"
#include "rismc/baselines.hpp"
#include "rismc/barrier_solver.hpp"
#include "rismc/bounds.hpp"
#include "rismc/model.hpp"
#include "rismc/robust.hpp"
#include "rismc/special_case.hpp"

namespace rismc::harness {

inline constexpr int kSchemaVersion = 1;

enum class SweepAxis { N, B, K, K_equals_M, ris_position_d0 };
std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

enum class Method { barrier, alternating, special_case, brute_force, beamforming, robust, no_ris, bounds };
std::string to_string(Method m);
Method method_from_string(const std::string& s);
/// Comma-separated list, e.g. "alternating,no_ris".
std::vector<Method> parse_method_list(const std::string& s);

/// Path-loss placement: BS at the origin, RIS at (d0, ris_y), users uniform
/// in a disk. Powers follow the dBW / dBm conventions of the setup.
struct GeometrySettings {
  bool enabled = false;
  double ris_x = 50.0;  // d0, overridden by the ris_position_d0 axis
  double ris_y = 50.0;
  double user_center_x = 150.0;
  double user_center_y = 0.0;
  double user_radius = 50.0;
  double p_max_dBW = 10.0;
  double noise_dBm = -80.0;
};

struct RobustSettings {
  double eps = 0.5;
  double target_rate_bits = 1.0;
  baselines::RobustConfig config;
};

struct ExperimentPlan {
  int schema_version = kSchemaVersion;
  std::string name;
  SweepAxis axis = SweepAxis::N;
  std::vector<double> axis_values;

  int M = 8;
  int N = 8;
  int K = 2;
  double B = 1.0;
  bool pure_los = false;
  double rho_dB = 20.0;  // p_max = 10^(rho/10) with unit noise
  double d_over_lambda = 1.0;
  GeometrySettings geometry;

  std::vector<Method> methods;
  int trials = 1;
  std::uint64_t seed = 0;
  int workers = 1;

  alternating::AlternatingConfig alternating;
  barrier::BarrierConfig barrier;
  special::P3Options special;
  baselines::GridSpec brute_force;
  baselines::BeamformingConfig beamforming;
  RobustSettings robust;
  std::vector<bounds::CurveKind> curves;
  double km_lower_l = 0.0;

  /// When non-empty, the (Q, theta) of every solved row is written here as JSON.
  std::string solutions_out;

  /// Throws ConfigError with the offending field.
  void validate() const;
  /// Transmit power in the normalized units seen by the solvers.
  double p_max() const;
  /// Dimensions and Rician factor at one axis value.
  SystemDims dims_at(double axis_value) const;
  RicianFactor rician_at(double axis_value) const;
};

/// Parses a plan document. Unknown keys are rejected so that typos surface.
ExperimentPlan plan_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan load_plan(const std::string& path);

/// Named parameterizations of the simulation figures. Names: runtime, fig_N,
/// fig_B, fig_K, fig_KM, fig_d0; a "_m16" suffix switches M to 16.
ExperimentPlan preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace rismc::harness
