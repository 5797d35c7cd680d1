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
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rismc/config.hpp"
#include "rismc/objective.hpp"

namespace rismc::harness {

inline constexpr const char* kCsvHeader = "axis,axis_value,method,trial,seed,capacity_bits,iterations,status,wall_ms";

struct ResultRow {
  std::string axis;
  double axis_value = 0.0;
  std::string method;
  int trial = 0;
  std::uint64_t seed = 0;
  double capacity_bits = 0.0;
  int iterations = 0;
  std::string status;
  double wall_ms = 0.0;
};

/// Stored solution of one row, enough to recompute its rate.
struct StoredSolution {
  std::size_t row = 0;
  CMatrix Q;      // empty for rank-one robust designs
  CVector v;      // robust beam (full power), empty otherwise
  RVector theta;
};

struct PointSummary {
  double axis_value = 0.0;
  std::string method;
  int count = 0;  // rows that were solved (skipped and infeasible rows excluded)
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<PointSummary> summary;
  std::vector<StoredSolution> solutions;
};

/// Channel draw for one (point, trial). Every method of the trial sees the
/// same realization.
ChannelRealization trial_channel(const ExperimentPlan& plan, double axis_value, std::uint64_t trial_seed);

/// Seed of trial `trial` at point index `point`.
std::uint64_t trial_seed(const ExperimentPlan& plan, std::size_t point, int trial);

/// Runs every (point, trial) with the plan's worker count. Rows are ordered
/// by point, trial and method regardless of scheduling. Every solved row is
/// re-validated against its stored solution; a mismatch above 1e-6 bits
/// throws InvariantError.
SweepResult run(const ExperimentPlan& plan);

std::vector<PointSummary> summarize(const std::vector<ResultRow>& rows);

/// CSV with the fixed header. `with_timing = false` blanks the wall_ms
/// column, giving the replay-comparable form.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool with_timing = true);
std::string to_csv(const std::vector<ResultRow>& rows, bool with_timing = true);

nlohmann::json solutions_to_json(const SweepResult& result);

/// Empirical wall-time distribution per method.
struct TimingReport {
  std::map<std::string, std::vector<double>> wall_ms;  // sorted ascending
  double median(const std::string& method) const;
};
TimingReport timing_report(const SweepResult& result);
TimingReport timing_report(const ExperimentPlan& plan);
/// method,rank,fraction,wall_ms rows of the empirical CDF.
void write_timing_csv(std::ostream& out, const TimingReport& report);

nlohmann::json report_to_json(const SolveReport& report);

}  // namespace rismc::harness
