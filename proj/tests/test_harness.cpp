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

#include <sstream>

#include "rismc/harness.hpp"

using namespace rismc;
using namespace rismc::harness;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan p;
  p.name = "unit";
  p.axis = SweepAxis::N;
  p.axis_values = {2, 3};
  p.M = 2;
  p.K = 2;
  p.methods = {Method::alternating, Method::no_ris, Method::special_case, Method::bounds};
  p.curves = {bounds::CurveKind::upper_MN};
  p.trials = 2;
  p.seed = 21;
  p.alternating.J = 2;
  return p;
}

}  // namespace

TEST(Harness, RowsAreOrderedAndComplete) {
  const SweepResult r = run(small_plan());
  // Per point: 2 trials x 3 solver methods, plus one bounds row.
  ASSERT_EQ(r.rows.size(), 2u * (2u * 3u + 1u));
  EXPECT_EQ(r.rows[0].method, "alternating");
  EXPECT_EQ(r.rows[1].method, "no_ris");
  EXPECT_EQ(r.rows[2].method, "special_case");
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.axis, "N");
    EXPECT_TRUE(row.status == "converged" || row.status == "skipped" || row.status == "max_iterations" ||
                row.status == "stalled")
        << row.status;
  }
}

TEST(Harness, JointOptimizationBeatsDirectLinksPerTrial) {
  const SweepResult r = run(small_plan());
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i) {
    if (r.rows[i].method != "alternating") continue;
    ASSERT_EQ(r.rows[i + 1].method, "no_ris");
    EXPECT_GE(r.rows[i].capacity_bits, r.rows[i + 1].capacity_bits - 1e-6);
  }
}

TEST(Harness, CsvIsDeterministicAcrossWorkerCounts) {
  ExperimentPlan p = small_plan();
  const std::string a = to_csv(run(p).rows, false);
  p.workers = 3;
  const std::string b = to_csv(run(p).rows, false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kCsvHeader);
}

TEST(Harness, TrialSeedsAreDistinctAndStable) {
  const ExperimentPlan p = small_plan();
  EXPECT_EQ(trial_seed(p, 1, 1), trial_seed(p, 1, 1));
  EXPECT_NE(trial_seed(p, 0, 1), trial_seed(p, 1, 0));
  const auto a = trial_channel(p, 3, trial_seed(p, 1, 0));
  const auto b = trial_channel(p, 3, trial_seed(p, 1, 0));
  EXPECT_EQ((a.H - b.H).norm(), 0.0);
  EXPECT_EQ(a.N(), 3);
}

TEST(Harness, SummaryStatistics) {
  std::vector<ResultRow> rows;
  for (int i = 0; i < 4; ++i) rows.push_back({"K", 2.0, "alternating", i, 0, 1.0 + i, 1, "converged", 0.0});
  rows.push_back({"K", 2.0, "alternating", 4, 0, 100.0, 1, "skipped", 0.0});
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].count, 4);
  EXPECT_NEAR(s[0].mean, 2.5, 1e-12);
  EXPECT_NEAR(s[0].stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(s[0].stderr_mean, std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
}

TEST(Harness, SolutionsAndTiming) {
  ExperimentPlan p = small_plan();
  p.methods = {Method::alternating};
  const SweepResult r = run(p);
  const auto doc = solutions_to_json(r);
  EXPECT_EQ(doc.size(), r.solutions.size());
  const TimingReport t = timing_report(r);
  ASSERT_EQ(t.wall_ms.count("alternating"), 1u);
  EXPECT_EQ(t.wall_ms.at("alternating").size(), 4u);
  std::ostringstream os;
  write_timing_csv(os, t);
  EXPECT_NE(os.str().find("alternating"), std::string::npos);
}
