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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rismc/acceptance.hpp"
#include "rismc/alternating.hpp"
#include "rismc/barrier_solver.hpp"
#include "rismc/baselines.hpp"
#include "rismc/bounds.hpp"
#include "rismc/config.hpp"
#include "rismc/errors.hpp"
#include "rismc/harness.hpp"
#include "rismc/robust.hpp"
#include "rismc/special_case.hpp"

using namespace rismc;
using harness::ExperimentPlan;
using harness::Method;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::string methods;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

ExperimentPlan resolve_plan(const Common& c) {
  if (!c.config.empty() && !c.preset.empty()) throw ConfigError("--config and --preset are mutually exclusive");
  ExperimentPlan plan;
  if (!c.config.empty()) {
    plan = harness::load_plan(c.config);
  } else if (!c.preset.empty()) {
    plan = harness::preset(c.preset);
  } else {
    throw ConfigError("one of --config or --preset is required");
  }
  if (c.seed_set) plan.seed = c.seed;
  if (c.workers > 0) plan.workers = c.workers;
  if (!c.methods.empty()) plan.methods = harness::parse_method_list(c.methods);
  plan.validate();
  return plan;
}

/// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file " + path);
  write(f);
}

nlohmann::json solve_one(const ExperimentPlan& plan, Method method) {
  const double axis_value = plan.axis_values.empty() ? 0.0 : plan.axis_values.front();
  const std::uint64_t seed = harness::trial_seed(plan, 0, 0);
  const ChannelRealization ch = harness::trial_channel(plan, axis_value, seed);
  const double P = plan.p_max();
  nlohmann::json doc;
  doc["method"] = harness::to_string(method);
  doc["seed"] = seed;
  doc["p_max"] = P;
  switch (method) {
    case Method::barrier: {
      auto cfg = plan.barrier;
      cfg.seed = seed;
      doc["report"] = harness::report_to_json(barrier::solve(ch, P, cfg));
      break;
    }
    case Method::alternating: {
      auto cfg = plan.alternating;
      cfg.seed = seed;
      doc["report"] = harness::report_to_json(alternating::solve(ch, P, cfg));
      break;
    }
    case Method::special_case:
      doc["report"] = harness::report_to_json(special::solve(ch, P, plan.special));
      break;
    case Method::brute_force: {
      const auto r = baselines::brute_force(ch, P, plan.brute_force);
      doc["report"] = harness::report_to_json(r.report);
      doc["evaluations"] = r.evaluations;
      doc["error_bound_bits"] = r.error_bound_bits;
      break;
    }
    case Method::beamforming: {
      auto cfg = plan.beamforming;
      cfg.seed = seed;
      doc["report"] = harness::report_to_json(baselines::beamforming(ch, P, cfg).report);
      break;
    }
    case Method::no_ris:
      doc["report"] = harness::report_to_json(baselines::no_ris(ch, P));
      break;
    case Method::robust: {
      baselines::UncertaintyModel model{ch, std::vector<double>(ch.K(), plan.robust.eps),
                                        plan.robust.target_rate_bits};
      auto cfg = plan.robust.config;
      cfg.seed = seed;
      const auto r = baselines::robust_beamforming(model, cfg);
      doc["status"] = to_string(r.status);
      doc["power"] = r.power;
      doc["iterations"] = r.iterations;
      doc["power_trace"] = r.power_trace;
      doc["theta"] = std::vector<double>(r.phase.theta().data(), r.phase.theta().data() + r.phase.N());
      break;
    }
    case Method::bounds:
      throw ConfigError("bounds is not a solver; use the bounds subcommand");
  }
  return doc;
}

bounds::CurveParams curve_params(const ExperimentPlan& plan, double axis_value) {
  const SystemDims d = plan.dims_at(axis_value);
  bounds::CurveParams p;
  p.M = d.M;
  p.N = d.N;
  p.K = d.K;
  p.B = plan.rician_at(axis_value);
  p.p_max = plan.p_max();
  p.l = plan.km_lower_l;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min capacity solvers for RIS-assisted multiuser MISO downlinks"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub, bool with_plan) {
    if (with_plan) {
      sub->add_option("--config", c.config, "experiment plan (JSON)");
      sub->add_option("--preset", c.preset, "named plan");
      sub->add_option("--method", c.methods, "comma-separated methods overriding the plan");
    }
    sub->add_option("--seed", c.seed, "base seed")->each([&](const std::string&) { c.seed_set = true; });
    sub->add_option("--workers", c.workers, "OpenMP worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output file (stdout when omitted)");
  };
  auto* solve = app.add_subcommand("solve", "solve the first trial of a plan and print the report as JSON");
  add_common(solve, true);
  auto* sweep = app.add_subcommand("sweep", "run every trial of a plan and write the result CSV");
  add_common(sweep, true);
  std::string solutions;
  sweep->add_option("--solutions", solutions, "write stored solutions (JSON) here");
  auto* bnd = app.add_subcommand("bounds", "evaluate the plan's asymptotic curves along its axis");
  add_common(bnd, true);
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  add_common(verify, false);
  std::vector<int> only;
  verify->add_option("--only", only, "criterion ids to run");
  auto* bench = app.add_subcommand("bench", "per-method wall-time distribution of a plan");
  add_common(bench, true);
  auto* presets = app.add_subcommand("presets", "list the named plans");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (presets->parsed()) {
      for (const auto& n : harness::preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (verify->parsed()) {
      acceptance::Options opt;
      if (c.seed_set) opt.seed = c.seed;
      if (c.workers > 0) opt.workers = c.workers;
      opt.only = only;
      bool ok = true;
      emit(c.out, [&](std::ostream& os) {
        for (const auto& r : acceptance::run(opt, os)) ok = ok && r.pass;
      });
      return ok ? 0 : 2;
    }
    const ExperimentPlan plan = resolve_plan(c);
    if (solve->parsed()) {
      nlohmann::json doc = nlohmann::json::array();
      for (Method m : plan.methods)
        if (m != Method::bounds) doc.push_back(solve_one(plan, m));
      emit(c.out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    } else if (sweep->parsed()) {
      const harness::SweepResult r = harness::run(plan);
      emit(c.out, [&](std::ostream& os) { harness::write_csv(os, r.rows); });
      const std::string sol_path = solutions.empty() ? plan.solutions_out : solutions;
      if (!sol_path.empty()) {
        std::ofstream f(sol_path);
        if (!f) throw ConfigError("cannot open output file " + sol_path);
        f << harness::solutions_to_json(r).dump(1) << '\n';
      }
      for (const auto& s : r.summary)
        std::fprintf(stderr, "%s=%g %s: mean %.4f bits (n=%d, se %.4f)\n", harness::to_string(plan.axis).c_str(),
                     s.axis_value, s.method.c_str(), s.mean, s.count, s.stderr_mean);
    } else if (bnd->parsed()) {
      if (plan.curves.empty()) throw ConfigError("bounds.curves is empty");
      emit(c.out, [&](std::ostream& os) {
        os << "curve,axis,axis_value,bits\n";
        for (auto kind : plan.curves)
          for (double x : plan.axis_values) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g,%.12f", x, bounds::bound_value(kind, curve_params(plan, x)));
            os << bounds::to_string(kind) << ',' << harness::to_string(plan.axis) << ',' << buf << '\n';
          }
      });
    } else if (bench->parsed()) {
      const harness::TimingReport t = harness::timing_report(plan);
      emit(c.out, [&](std::ostream& os) { harness::write_timing_csv(os, t); });
      for (const auto& [m, v] : t.wall_ms)
        std::fprintf(stderr, "%s: median %.2f ms over %zu solves\n", m.c_str(), t.median(m), v.size());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
