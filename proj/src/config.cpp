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

#include "rismc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rismc/errors.hpp"

namespace rismc::harness {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!keys.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::string theta_method_name(alternating::ThetaMethod m) {
  switch (m) {
    case alternating::ThetaMethod::krawczyk: return "krawczyk";
    case alternating::ThetaMethod::multistart: return "multistart";
    case alternating::ThetaMethod::automatic: return "automatic";
  }
  return "automatic";
}

alternating::ThetaMethod theta_method_from(const std::string& s) {
  if (s == "krawczyk") return alternating::ThetaMethod::krawczyk;
  if (s == "multistart") return alternating::ThetaMethod::multistart;
  if (s == "automatic") return alternating::ThetaMethod::automatic;
  throw ConfigError("alternating.theta_method: unknown value '" + s + "'");
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::N: return "N";
    case SweepAxis::B: return "B";
    case SweepAxis::K: return "K";
    case SweepAxis::K_equals_M: return "K_equals_M";
    case SweepAxis::ris_position_d0: return "ris_position_d0";
  }
  return "N";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (SweepAxis a : {SweepAxis::N, SweepAxis::B, SweepAxis::K, SweepAxis::K_equals_M, SweepAxis::ris_position_d0})
    if (to_string(a) == s) return a;
  throw ConfigError("axis: unknown value '" + s + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::barrier: return "barrier";
    case Method::alternating: return "alternating";
    case Method::special_case: return "special_case";
    case Method::brute_force: return "brute_force";
    case Method::beamforming: return "beamforming";
    case Method::robust: return "robust";
    case Method::no_ris: return "no_ris";
    case Method::bounds: return "bounds";
  }
  return "alternating";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::barrier, Method::alternating, Method::special_case, Method::brute_force,
                   Method::beamforming, Method::robust, Method::no_ris, Method::bounds})
    if (to_string(m) == s) return m;
  throw ConfigError("methods: unknown method '" + s + "'");
}

std::vector<Method> parse_method_list(const std::string& s) {
  std::vector<Method> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(method_from_string(item));
  }
  return out;
}

void ExperimentPlan::validate() const {
  if (schema_version != kSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion) + ", got " +
                      std::to_string(schema_version));
  if (axis_values.empty()) throw ConfigError("axis_values: at least one value is required");
  for (std::size_t i = 1; i < axis_values.size(); ++i)
    if (!(axis_values[i] > axis_values[i - 1])) throw ConfigError("axis_values: must be strictly increasing");
  for (double v : axis_values) {
    const bool count_axis = axis == SweepAxis::N || axis == SweepAxis::K || axis == SweepAxis::K_equals_M;
    if (count_axis && (!is_integral(v) || v < 1.0))
      throw ConfigError("axis_values: " + to_string(axis) + " values must be positive integers");
    if (axis == SweepAxis::B && !(v >= 0.0 && std::isfinite(v)))
      throw ConfigError("axis_values: Rician factors must be finite and >= 0");
    if (axis == SweepAxis::ris_position_d0 && !std::isfinite(v))
      throw ConfigError("axis_values: RIS positions must be finite");
  }
  if (M < 1 || N < 1 || K < 1) throw ConfigError("system: M, N and K must be >= 1");
  if (!pure_los && !(B >= 0.0 && std::isfinite(B))) throw ConfigError("system.B: must be finite and >= 0");
  if (!std::isfinite(rho_dB)) throw ConfigError("system.rho_dB: must be finite");
  if (!(d_over_lambda > 0.0)) throw ConfigError("system.d_over_lambda: must be > 0");
  if (axis == SweepAxis::ris_position_d0 && !geometry.enabled)
    throw ConfigError("axis ris_position_d0 requires geometry.enabled");
  if (geometry.enabled && !(geometry.user_radius >= 0.0)) throw ConfigError("geometry.user_radius: must be >= 0");
  if (methods.empty()) throw ConfigError("methods: at least one method is required");
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  try {
    alternating.validate();
    barrier.validate();
    brute_force.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (special.restarts < 1) throw ConfigError("special_case.restarts: must be >= 1");
  if (beamforming.restarts < 1 || beamforming.randomizations < 0 || beamforming.max_outer < 1)
    throw ConfigError("beamforming: restarts and max_outer must be >= 1, randomizations >= 0");
  if (!(robust.eps >= 0.0)) throw ConfigError("robust.eps: must be >= 0");
  if (!(robust.target_rate_bits > 0.0)) throw ConfigError("robust.target_rate_bits: must be > 0");
}

double ExperimentPlan::p_max() const {
  if (geometry.enabled) return std::pow(10.0, geometry.p_max_dBW / 10.0);
  return db_to_linear(rho_dB);
}

SystemDims ExperimentPlan::dims_at(double v) const {
  int m = M, n = N, k = K;
  switch (axis) {
    case SweepAxis::N: n = static_cast<int>(v); break;
    case SweepAxis::K: k = static_cast<int>(v); break;
    case SweepAxis::K_equals_M: k = m = static_cast<int>(v); break;
    case SweepAxis::B:
    case SweepAxis::ris_position_d0: break;
  }
  return SystemDims::make(m, n, k);
}

RicianFactor ExperimentPlan::rician_at(double v) const {
  if (axis == SweepAxis::B) return RicianFactor::finite(v);
  return pure_los ? RicianFactor::pure_los() : RicianFactor::finite(B);
}

ExperimentPlan plan_from_json(const json& doc) {
  reject_unknown(doc, "plan",
                 {"schema_version", "name", "axis", "axis_values", "system", "geometry", "methods", "trials", "seed",
                  "workers", "alternating", "barrier", "special_case", "brute_force", "beamforming", "robust",
                  "bounds", "solutions_out"});
  if (!doc.contains("schema_version")) throw ConfigError("schema_version: required");
  ExperimentPlan p;
  read(doc, "schema_version", p.schema_version, "plan");
  if (p.schema_version != kSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion));
  read(doc, "name", p.name, "plan");
  if (doc.contains("axis")) p.axis = sweep_axis_from_string(doc.at("axis").get<std::string>());
  read(doc, "axis_values", p.axis_values, "plan");
  read(doc, "trials", p.trials, "plan");
  read(doc, "seed", p.seed, "plan");
  read(doc, "workers", p.workers, "plan");
  read(doc, "solutions_out", p.solutions_out, "plan");
  if (doc.contains("methods")) {
    p.methods.clear();
    for (const auto& m : doc.at("methods")) p.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (doc.contains("system")) {
    const json& s = doc.at("system");
    reject_unknown(s, "system", {"M", "N", "K", "B", "rho_dB", "d_over_lambda"});
    read(s, "M", p.M, "system");
    read(s, "N", p.N, "system");
    read(s, "K", p.K, "system");
    if (s.contains("B")) {
      if (s.at("B").is_string()) {
        if (s.at("B").get<std::string>() != "los") throw ConfigError("system.B: a number or \"los\"");
        p.pure_los = true;
      } else {
        read(s, "B", p.B, "system");
      }
    }
    read(s, "rho_dB", p.rho_dB, "system");
    read(s, "d_over_lambda", p.d_over_lambda, "system");
  }
  if (doc.contains("geometry")) {
    const json& g = doc.at("geometry");
    reject_unknown(g, "geometry",
                   {"enabled", "ris_x", "ris_y", "user_center_x", "user_center_y", "user_radius", "p_max_dBW",
                    "noise_dBm"});
    read(g, "enabled", p.geometry.enabled, "geometry");
    read(g, "ris_x", p.geometry.ris_x, "geometry");
    read(g, "ris_y", p.geometry.ris_y, "geometry");
    read(g, "user_center_x", p.geometry.user_center_x, "geometry");
    read(g, "user_center_y", p.geometry.user_center_y, "geometry");
    read(g, "user_radius", p.geometry.user_radius, "geometry");
    read(g, "p_max_dBW", p.geometry.p_max_dBW, "geometry");
    read(g, "noise_dBm", p.geometry.noise_dBm, "geometry");
  }
  if (doc.contains("alternating")) {
    const json& a = doc.at("alternating");
    reject_unknown(a, "alternating",
                   {"J", "delta", "max_outer", "theta_method", "krawczyk_max_N", "krawczyk_max_boxes",
                    "multistart_restarts", "polish_candidates"});
    read(a, "J", p.alternating.J, "alternating");
    read(a, "delta", p.alternating.delta, "alternating");
    read(a, "max_outer", p.alternating.max_outer, "alternating");
    if (a.contains("theta_method")) p.alternating.theta_method = theta_method_from(a.at("theta_method").get<std::string>());
    read(a, "krawczyk_max_N", p.alternating.krawczyk_max_N, "alternating");
    read(a, "krawczyk_max_boxes", p.alternating.krawczyk_max_boxes, "alternating");
    read(a, "multistart_restarts", p.alternating.multistart_restarts, "alternating");
    read(a, "polish_candidates", p.alternating.polish_candidates, "alternating");
  }
  if (doc.contains("barrier")) {
    const json& b = doc.at("barrier");
    reject_unknown(b, "barrier",
                   {"t0", "rho", "alpha", "eta", "delta1", "delta2", "max_inner", "max_outer", "restarts"});
    read(b, "t0", p.barrier.t0, "barrier");
    read(b, "rho", p.barrier.rho, "barrier");
    read(b, "alpha", p.barrier.alpha, "barrier");
    read(b, "eta", p.barrier.eta, "barrier");
    read(b, "delta1", p.barrier.delta1, "barrier");
    read(b, "delta2", p.barrier.delta2, "barrier");
    read(b, "max_inner", p.barrier.max_inner, "barrier");
    read(b, "max_outer", p.barrier.max_outer, "barrier");
    read(b, "restarts", p.barrier.restarts, "barrier");
  }
  if (doc.contains("special_case")) {
    const json& s = doc.at("special_case");
    reject_unknown(s, "special_case", {"restarts", "krawczyk_max_N"});
    read(s, "restarts", p.special.restarts, "special_case");
    read(s, "krawczyk_max_N", p.special.krawczyk_max_N, "special_case");
  }
  if (doc.contains("brute_force")) {
    const json& g = doc.at("brute_force");
    reject_unknown(g, "brute_force", {"phase_levels", "cov_levels", "budget"});
    read(g, "phase_levels", p.brute_force.phase_levels, "brute_force");
    read(g, "cov_levels", p.brute_force.cov_levels, "brute_force");
    read(g, "budget", p.brute_force.budget, "brute_force");
  }
  if (doc.contains("beamforming")) {
    const json& b = doc.at("beamforming");
    reject_unknown(b, "beamforming", {"restarts", "randomizations", "max_outer", "delta"});
    read(b, "restarts", p.beamforming.restarts, "beamforming");
    read(b, "randomizations", p.beamforming.randomizations, "beamforming");
    read(b, "max_outer", p.beamforming.max_outer, "beamforming");
    read(b, "delta", p.beamforming.delta, "beamforming");
  }
  if (doc.contains("robust")) {
    const json& r = doc.at("robust");
    reject_unknown(r, "robust", {"eps", "target_rate_bits", "max_outer", "max_inner", "iota0", "eta", "iota_max"});
    read(r, "eps", p.robust.eps, "robust");
    read(r, "target_rate_bits", p.robust.target_rate_bits, "robust");
    read(r, "max_outer", p.robust.config.max_outer, "robust");
    read(r, "max_inner", p.robust.config.max_inner, "robust");
    read(r, "iota0", p.robust.config.iota0, "robust");
    read(r, "eta", p.robust.config.eta, "robust");
    read(r, "iota_max", p.robust.config.iota_max, "robust");
  }
  if (doc.contains("bounds")) {
    const json& b = doc.at("bounds");
    reject_unknown(b, "bounds", {"curves", "l"});
    if (b.contains("curves")) {
      p.curves.clear();
      try {
        for (const auto& c : b.at("curves")) p.curves.push_back(bounds::curve_kind_from_string(c.get<std::string>()));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(std::string("bounds.curves: ") + e.what());
      }
    }
    read(b, "l", p.km_lower_l, "bounds");
  }
  p.validate();
  return p;
}

json plan_to_json(const ExperimentPlan& p) {
  json doc;
  doc["schema_version"] = p.schema_version;
  doc["name"] = p.name;
  doc["axis"] = to_string(p.axis);
  doc["axis_values"] = p.axis_values;
  json sys{{"M", p.M}, {"N", p.N}, {"K", p.K}, {"rho_dB", p.rho_dB}, {"d_over_lambda", p.d_over_lambda}};
  if (p.pure_los)
    sys["B"] = "los";
  else
    sys["B"] = p.B;
  doc["system"] = sys;
  const GeometrySettings& g = p.geometry;
  doc["geometry"] = {{"enabled", g.enabled},         {"ris_x", g.ris_x},
                     {"ris_y", g.ris_y},             {"user_center_x", g.user_center_x},
                     {"user_center_y", g.user_center_y}, {"user_radius", g.user_radius},
                     {"p_max_dBW", g.p_max_dBW},     {"noise_dBm", g.noise_dBm}};
  json methods = json::array();
  for (Method m : p.methods) methods.push_back(to_string(m));
  doc["methods"] = methods;
  doc["trials"] = p.trials;
  doc["seed"] = p.seed;
  doc["workers"] = p.workers;
  const auto& a = p.alternating;
  doc["alternating"] = {{"J", a.J},
                        {"delta", a.delta},
                        {"max_outer", a.max_outer},
                        {"theta_method", theta_method_name(a.theta_method)},
                        {"krawczyk_max_N", a.krawczyk_max_N},
                        {"krawczyk_max_boxes", a.krawczyk_max_boxes},
                        {"multistart_restarts", a.multistart_restarts},
                        {"polish_candidates", a.polish_candidates}};
  const auto& b = p.barrier;
  doc["barrier"] = {{"t0", b.t0},         {"rho", b.rho},           {"alpha", b.alpha},
                    {"eta", b.eta},       {"delta1", b.delta1},     {"delta2", b.delta2},
                    {"max_inner", b.max_inner}, {"max_outer", b.max_outer}, {"restarts", b.restarts}};
  doc["special_case"] = {{"restarts", p.special.restarts}, {"krawczyk_max_N", p.special.krawczyk_max_N}};
  doc["brute_force"] = {{"phase_levels", p.brute_force.phase_levels},
                        {"cov_levels", p.brute_force.cov_levels},
                        {"budget", p.brute_force.budget}};
  doc["beamforming"] = {{"restarts", p.beamforming.restarts},
                        {"randomizations", p.beamforming.randomizations},
                        {"max_outer", p.beamforming.max_outer},
                        {"delta", p.beamforming.delta}};
  doc["robust"] = {{"eps", p.robust.eps},
                   {"target_rate_bits", p.robust.target_rate_bits},
                   {"max_outer", p.robust.config.max_outer},
                   {"max_inner", p.robust.config.max_inner},
                   {"iota0", p.robust.config.iota0},
                   {"eta", p.robust.config.eta},
                   {"iota_max", p.robust.config.iota_max}};
  json curves = json::array();
  for (auto c : p.curves) curves.push_back(bounds::to_string(c));
  doc["bounds"] = {{"curves", curves}, {"l", p.km_lower_l}};
  doc["solutions_out"] = p.solutions_out;
  return doc;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return plan_from_json(doc);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> base{"runtime", "fig_N", "fig_B", "fig_K", "fig_KM", "fig_d0"};
  std::vector<std::string> out = base;
  for (const auto& b : base) out.push_back(b + "_m16");
  return out;
}

ExperimentPlan preset(const std::string& name_in) {
  std::string name = name_in;
  bool m16 = false;
  const std::string suffix = "_m16";
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    m16 = true;
    name.resize(name.size() - suffix.size());
  }
  ExperimentPlan p;
  p.name = name_in;
  p.M = 8;
  p.N = 8;
  p.B = 1.0;
  p.rho_dB = 20.0;
  p.trials = 20;
  using bounds::CurveKind;
  if (name == "runtime") {
    p.axis = SweepAxis::N;
    p.axis_values = {8};
    p.K = 1;
    p.methods = {Method::barrier, Method::alternating, Method::special_case};
    p.trials = 50;
  } else if (name == "fig_N") {
    p.axis = SweepAxis::N;
    p.axis_values = {2, 4, 6, 8, 10, 12, 14, 16};
    p.K = 8;
    p.methods = {Method::alternating, Method::beamforming, Method::no_ris, Method::brute_force, Method::bounds};
    p.curves = {CurveKind::upper_MN, CurveKind::lower_MN};
  } else if (name == "fig_B") {
    p.axis = SweepAxis::B;
    p.axis_values = {0, 0.5, 1, 2, 4, 8, 16, 32};
    p.K = 8;
    p.methods = {Method::alternating, Method::beamforming, Method::no_ris, Method::bounds};
    p.curves = {CurveKind::lower_MN};
  } else if (name == "fig_K") {
    p.axis = SweepAxis::K;
    p.axis_values = {2, 4, 8, 16};
    p.methods = {Method::alternating, Method::beamforming, Method::no_ris, Method::bounds};
    p.curves = {CurveKind::k_decay, CurveKind::k_decay_statement};
  } else if (name == "fig_KM") {
    p.axis = SweepAxis::K_equals_M;
    p.axis_values = {2, 4, 8, 16};
    p.methods = {Method::alternating, Method::beamforming, Method::bounds};
    p.curves = {CurveKind::km_lower, CurveKind::km_upper};
    p.km_lower_l = 1.0;
  } else if (name == "fig_d0") {
    p.axis = SweepAxis::ris_position_d0;
    p.axis_values = {0, 25, 50, 75, 100, 125, 150};
    p.K = 8;
    p.geometry.enabled = true;
    p.methods = {Method::alternating, Method::no_ris};
  } else {
    throw ConfigError("unknown preset '" + name_in + "'");
  }
  if (m16) p.M = 16;
  p.alternating.J = 4;
  p.validate();
  return p;
}

}  // namespace rismc::harness
