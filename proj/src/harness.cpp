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

#include "rismc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

namespace rismc::harness {

using nlohmann::json;

namespace {

constexpr double kRevalidateTol = 1e-6;

std::string row_status(SolveStatus s) {
  if (s == SolveStatus::refused || s == SolveStatus::skipped) return "skipped";
  return to_string(s);
}

bool is_solved(const std::string& status) { return status != "skipped" && status != "infeasible"; }

struct TrialOutput {
  std::vector<ResultRow> rows;
  std::vector<StoredSolution> solutions;  // row indices local to `rows`
};

void check_rate(double stored, double recomputed, const std::string& method) {
  if (std::fabs(stored - recomputed) > kRevalidateTol) {
    std::ostringstream msg;
    msg << method << ": stored capacity " << stored << " differs from recomputed " << recomputed;
    throw InvariantError(msg.str());
  }
}

TrialOutput run_trial(const ExperimentPlan& plan, double axis_value, int trial, std::uint64_t seed) {
  TrialOutput out;
  const ChannelRealization ch = trial_channel(plan, axis_value, seed);
  const double p = plan.p_max();
  std::optional<RVector> beam_phase;

  auto order = plan.methods;
  // The beamformer runs first so that its phases can seed the alternating
  // solver when both are requested.
  std::stable_sort(order.begin(), order.end(), [](Method a, Method b) {
    return (a == Method::beamforming) > (b == Method::beamforming);
  });
  std::vector<std::pair<Method, std::size_t>> placed;

  for (Method m : order) {
    if (m == Method::bounds) continue;
    const std::uint64_t mseed = derive_seed(seed, {static_cast<std::uint64_t>(m) + 1});
    ResultRow row;
    row.axis = to_string(plan.axis);
    row.axis_value = axis_value;
    row.method = to_string(m);
    row.trial = trial;
    row.seed = seed;
    StoredSolution sol;
    bool have_solution = false;
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    bool use_report = true;
    switch (m) {
      case Method::barrier: {
        barrier::BarrierConfig cfg = plan.barrier;
        cfg.seed = mseed;
        rep = barrier::solve(ch, p, cfg);
        break;
      }
      case Method::alternating: {
        alternating::AlternatingConfig cfg = plan.alternating;
        cfg.seed = mseed;
        if (beam_phase) cfg.extra_inits.push_back(*beam_phase);
        rep = alternating::solve(ch, p, cfg);
        break;
      }
      case Method::special_case: {
        special::P3Options opt = plan.special;
        opt.seed = mseed;
        rep = special::solve(ch, p, opt);
        break;
      }
      case Method::brute_force:
        rep = baselines::brute_force(ch, p, plan.brute_force).report;
        break;
      case Method::beamforming: {
        baselines::BeamformingConfig cfg = plan.beamforming;
        cfg.seed = mseed;
        cfg.theta = plan.alternating;
        const baselines::BeamformingResult bf = baselines::beamforming(ch, p, cfg);
        rep = bf.report;
        beam_phase = bf.phase.theta();
        break;
      }
      case Method::no_ris:
        rep = baselines::no_ris(ch, p);
        break;
      case Method::robust: {
        use_report = false;
        const auto& rs = plan.robust;
        if (ch.M() > rs.config.max_dim || ch.N() > rs.config.max_dim) {
          row.status = "skipped";
          break;
        }
        baselines::UncertaintyModel model{ch, std::vector<double>(ch.K(), rs.eps), rs.target_rate_bits};
        baselines::RobustConfig cfg = rs.config;
        cfg.seed = mseed;
        const baselines::RobustResult r = baselines::robust_beamforming(model, cfg);
        row.iterations = r.iterations;
        row.status = row_status(r.status);
        if (r.status == SolveStatus::infeasible || !(r.power > 0.0)) break;
        // Worst-case SNR scales with ||v||^2, so the design at full power
        // reaches target * p / power.
        const CVector v = r.v * std::sqrt(p / r.power);
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < ch.K(); ++k) worst = std::min(worst, baselines::worst_case_snr(model, v, r.phase, k));
        row.capacity_bits = bits(model.snr_target() * p / r.power);
        check_rate(row.capacity_bits, bits(worst), "robust");
        sol.v = v;
        sol.theta = r.phase.theta();
        have_solution = true;
        break;
      }
      case Method::bounds:
        break;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (use_report) {
      row.iterations = rep.iterations;
      row.status = row_status(rep.status);
      if (is_solved(row.status)) {
        row.capacity_bits = rep.capacity_bits;
        const double recomputed = m == Method::no_ris
                                      ? min_rate(rep.Q, rep.phase, baselines::direct_links_only(ch)).value
                                      : min_rate(rep.Q, rep.phase, ch).value;
        check_rate(row.capacity_bits, recomputed, row.method);
        sol.Q = rep.Q.Q;
        sol.theta = rep.phase.theta();
        have_solution = true;
      }
    }
    placed.emplace_back(m, out.rows.size());
    out.rows.push_back(row);
    if (have_solution) {
      sol.row = out.rows.size() - 1;
      out.solutions.push_back(std::move(sol));
    }
  }

  // Canonical order: the plan's method order.
  TrialOutput ordered;
  for (Method m : plan.methods) {
    for (const auto& [pm, idx] : placed) {
      if (pm != m) continue;
      ordered.rows.push_back(out.rows[idx]);
      for (auto& s : out.solutions)
        if (s.row == idx) {
          StoredSolution copy = s;
          copy.row = ordered.rows.size() - 1;
          ordered.solutions.push_back(std::move(copy));
        }
    }
  }
  return ordered;
}

std::vector<ResultRow> bound_rows(const ExperimentPlan& plan, double axis_value) {
  std::vector<ResultRow> rows;
  const SystemDims dims = plan.dims_at(axis_value);
  bounds::CurveParams params;
  params.M = dims.M;
  params.N = dims.N;
  params.K = dims.K;
  params.B = plan.rician_at(axis_value);
  params.p_max = plan.p_max();
  params.l = plan.km_lower_l;
  for (auto kind : plan.curves) {
    ResultRow row;
    row.axis = to_string(plan.axis);
    row.axis_value = axis_value;
    row.method = "bounds:" + bounds::to_string(kind);
    const double v = bounds::bound_value(kind, params);
    if (std::isfinite(v)) {
      row.capacity_bits = v;
      row.status = "converged";
    } else {
      row.status = "skipped";
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::uint64_t trial_seed(const ExperimentPlan& plan, std::size_t point, int trial) {
  return derive_seed(plan.seed, {static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(trial)});
}

ChannelRealization trial_channel(const ExperimentPlan& plan, double axis_value, std::uint64_t seed) {
  const SystemDims dims = plan.dims_at(axis_value);
  RicianParams params;
  params.B = plan.rician_at(axis_value);
  params.d_over_lambda = plan.d_over_lambda;
  params.seed = seed;
  if (!plan.geometry.enabled) return sample_channels(dims, params);

  const GeometrySettings& gs = plan.geometry;
  Geometry geo;
  geo.bs = {0.0, 0.0};
  geo.ris = {plan.axis == SweepAxis::ris_position_d0 ? axis_value : gs.ris_x, gs.ris_y};
  geo.noise_power_dBm = gs.noise_dBm;
  CounterRng rng(derive_seed(seed, {0x75736572ULL}));
  for (int k = 0; k < dims.K; ++k) {
    // Uniform in the disk: radius from the square root of a uniform draw.
    const double r = gs.user_radius * std::sqrt(rng.uniform());
    const double a = rng.uniform_angle();
    geo.users.push_back({gs.user_center_x + r * std::cos(a), gs.user_center_y + r * std::sin(a)});
  }
  return sample_channels(dims, params, geo);
}

SweepResult run(const ExperimentPlan& plan) {
  plan.validate();
  const std::size_t points = plan.axis_values.size();
  const int trials = plan.trials;
  const std::size_t tasks = points * static_cast<std::size_t>(trials);
  std::vector<TrialOutput> outputs(tasks);
  std::vector<std::string> errors(tasks);

#pragma omp parallel for schedule(dynamic) num_threads(plan.workers)
  for (std::size_t task = 0; task < tasks; ++task) {
    const std::size_t point = task / trials;
    const int trial = static_cast<int>(task % trials);
    try {
      outputs[task] = run_trial(plan, plan.axis_values[point], trial, trial_seed(plan, point, trial));
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  }
  for (std::size_t task = 0; task < tasks; ++task)
    if (!errors[task].empty()) throw InvariantError("trial " + std::to_string(task) + ": " + errors[task]);

  SweepResult result;
  const bool with_bounds = std::find(plan.methods.begin(), plan.methods.end(), Method::bounds) != plan.methods.end();
  for (std::size_t point = 0; point < points; ++point) {
    for (int trial = 0; trial < trials; ++trial) {
      TrialOutput& o = outputs[point * trials + trial];
      const std::size_t base = result.rows.size();
      for (auto& row : o.rows) result.rows.push_back(std::move(row));
      for (auto& s : o.solutions) {
        s.row += base;
        result.solutions.push_back(std::move(s));
      }
    }
    if (with_bounds)
      for (auto& row : bound_rows(plan, plan.axis_values[point])) result.rows.push_back(std::move(row));
  }
  result.summary = summarize(result.rows);
  return result;
}

std::vector<PointSummary> summarize(const std::vector<ResultRow>& rows) {
  std::vector<PointSummary> out;
  std::vector<std::vector<double>> values;
  for (const ResultRow& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PointSummary& s) {
      return s.axis_value == r.axis_value && s.method == r.method;
    });
    std::size_t idx;
    if (it == out.end()) {
      out.push_back({r.axis_value, r.method, 0, 0.0, 0.0, 0.0});
      values.emplace_back();
      idx = out.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - out.begin());
    }
    if (is_solved(r.status)) values[idx].push_back(r.capacity_bits);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = values[i];
    out[i].count = static_cast<int>(v.size());
    if (v.empty()) continue;
    double sum = 0.0;
    for (double x : v) sum += x;
    out[i].mean = sum / v.size();
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - out[i].mean) * (x - out[i].mean);
      out[i].stddev = std::sqrt(ss / (v.size() - 1));
      out[i].stderr_mean = out[i].stddev / std::sqrt(static_cast<double>(v.size()));
    }
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool with_timing) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%d,%llu,%.12f,%d,%s,", r.axis.c_str(), r.axis_value,
                  r.method.c_str(), r.trial, static_cast<unsigned long long>(r.seed), r.capacity_bits, r.iterations,
                  r.status.c_str());
    out << buf;
    if (with_timing) {
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
      out << buf;
    }
    out << '\n';
  }
}

std::string to_csv(const std::vector<ResultRow>& rows, bool with_timing) {
  std::ostringstream out;
  write_csv(out, rows, with_timing);
  return out.str();
}

namespace {

json matrix_to_json(const CMatrix& Q) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < Q.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < Q.cols(); ++c) {
      rr.push_back(Q(r, c).real());
      ii.push_back(Q(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

std::vector<double> to_std(const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

json solutions_to_json(const SweepResult& result) {
  json arr = json::array();
  for (const StoredSolution& s : result.solutions) {
    const ResultRow& r = result.rows[s.row];
    json e{{"axis_value", r.axis_value}, {"method", r.method}, {"trial", r.trial}, {"seed", r.seed},
           {"capacity_bits", r.capacity_bits}, {"theta", to_std(s.theta)}};
    if (s.Q.size() > 0) e["Q"] = matrix_to_json(s.Q);
    if (s.v.size() > 0) e["v"] = matrix_to_json(s.v);
    arr.push_back(e);
  }
  return arr;
}

double TimingReport::median(const std::string& method) const {
  auto it = wall_ms.find(method);
  if (it == wall_ms.end() || it->second.empty()) return std::nan("");
  const auto& v = it->second;
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TimingReport timing_report(const SweepResult& result) {
  TimingReport rep;
  for (const ResultRow& r : result.rows) {
    if (r.method.rfind("bounds:", 0) == 0) continue;
    rep.wall_ms[r.method].push_back(r.wall_ms);
  }
  for (auto& [m, v] : rep.wall_ms) std::sort(v.begin(), v.end());
  return rep;
}

TimingReport timing_report(const ExperimentPlan& plan) {
  if (plan.methods.empty()) return {};
  return timing_report(run(plan));
}

void write_timing_csv(std::ostream& out, const TimingReport& report) {
  out << "method,rank,fraction,wall_ms\n";
  char buf[256];
  for (const auto& [m, v] : report.wall_ms) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%.3f\n", m.c_str(), i + 1,
                    static_cast<double>(i + 1) / v.size(), v[i]);
      out << buf;
    }
  }
}

json report_to_json(const SolveReport& r) {
  json j;
  j["method"] = r.method;
  j["capacity_bits"] = r.capacity_bits;
  j["gamma"] = r.gamma;
  j["iterations"] = r.iterations;
  j["status"] = to_string(r.status);
  j["snrs"] = r.snrs;
  j["rates"] = r.rates;
  j["theta"] = to_std(r.phase.theta());
  j["Q"] = matrix_to_json(r.Q.Q);
  j["p_max"] = r.Q.p_max;
  j["init_index"] = r.init_index;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace rismc::harness
