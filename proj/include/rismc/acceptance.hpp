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
#include <ostream>
#include <string>
#include <vector>

namespace rismc::acceptance {

struct Options {
  std::uint64_t seed = 1;
  int workers = 1;
  /// Criteria to run (1..12); empty runs all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria in order, printing one PASS/FAIL line per
/// criterion to `log` as each finishes.
std::vector<CriterionResult> run(const Options& opt, std::ostream& log);

std::string format_line(const CriterionResult& r);

}  // namespace rismc::acceptance
