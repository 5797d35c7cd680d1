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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "rismc/config.hpp"
#include "rismc/errors.hpp"

using namespace rismc;
using namespace rismc::harness;
using nlohmann::json;

namespace {

json minimal() {
  return json{{"schema_version", 1},
              {"name", "t"},
              {"axis", "N"},
              {"axis_values", {2, 4}},
              {"system", {{"M", 2}, {"N", 4}, {"K", 2}, {"B", 1.0}}},
              {"methods", {"alternating", "no_ris"}},
              {"trials", 3},
              {"seed", 11}};
}

}  // namespace

TEST(Config, ParsesMinimalPlan) {
  const ExperimentPlan p = plan_from_json(minimal());
  EXPECT_EQ(p.M, 2);
  EXPECT_EQ(p.K, 2);
  EXPECT_EQ(p.trials, 3);
  ASSERT_EQ(p.methods.size(), 2u);
  EXPECT_EQ(p.methods[1], Method::no_ris);
  EXPECT_NO_THROW(p.validate());
  EXPECT_NEAR(p.p_max(), 100.0, 1e-12);
  EXPECT_EQ(p.dims_at(4).N, 4);
}

TEST(Config, RoundTripsThroughJson) {
  const ExperimentPlan p = plan_from_json(minimal());
  const ExperimentPlan q = plan_from_json(plan_to_json(p));
  EXPECT_EQ(plan_to_json(p).dump(), plan_to_json(q).dump());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  json doc = minimal();
  doc["sytem"] = json::object();
  EXPECT_THROW(plan_from_json(doc), ConfigError);
  doc = minimal();
  doc["system"]["Q"] = 1;
  EXPECT_THROW(plan_from_json(doc), ConfigError);
  doc = minimal();
  doc["schema_version"] = 2;
  EXPECT_THROW(plan_from_json(doc), ConfigError);
  doc = minimal();
  doc.erase("schema_version");
  EXPECT_THROW(plan_from_json(doc), ConfigError);
  doc = minimal();
  doc["trials"] = 0;
  EXPECT_THROW(plan_from_json(doc).validate(), ConfigError);
  doc = minimal();
  doc["methods"] = {"simplex"};
  EXPECT_THROW(plan_from_json(doc), ConfigError);
}

TEST(Config, PureLosIsSpelledOut) {
  json doc = minimal();
  doc["system"]["B"] = "los";
  const ExperimentPlan p = plan_from_json(doc);
  EXPECT_TRUE(p.pure_los);
  EXPECT_TRUE(p.rician_at(2).is_pure_los());
}

TEST(Config, MethodListsAndAxes) {
  const auto m = parse_method_list("barrier,robust,bounds");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[1], Method::robust);
  EXPECT_THROW(parse_method_list("barrier,foo"), ConfigError);
  for (auto a : {SweepAxis::N, SweepAxis::B, SweepAxis::K, SweepAxis::K_equals_M, SweepAxis::ris_position_d0})
    EXPECT_EQ(sweep_axis_from_string(to_string(a)), a);
}

TEST(Config, EveryPresetValidates) {
  for (const auto& name : preset_names()) {
    const ExperimentPlan p = preset(name);
    EXPECT_NO_THROW(p.validate()) << name;
    EXPECT_FALSE(p.axis_values.empty()) << name;
  }
  EXPECT_EQ(preset("fig_N_m16").M, 16);
  EXPECT_THROW(preset("fig_Z"), ConfigError);
}

TEST(Config, LoadsFromFile) {
  const std::string path = testing::TempDir() + "plan.json";
  {
    std::ofstream f(path);
    f << minimal().dump();
  }
  EXPECT_EQ(load_plan(path).seed, 11u);
  std::remove(path.c_str());
  EXPECT_THROW(load_plan(path), ConfigError);
}

TEST(Config, GeometryPowerIsNormalizedByNoise) {
  json doc = minimal();
  doc["geometry"] = {{"enabled", true}, {"p_max_dBW", 10.0}, {"noise_dBm", -80.0}};
  const ExperimentPlan p = plan_from_json(doc);
  // Channels are divided by the noise standard deviation, so p_max stays in watts.
  EXPECT_NEAR(p.p_max(), 10.0, 1e-9);
}
