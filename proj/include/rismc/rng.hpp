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
#include <initializer_list>
#include <limits>
#include <random>

#include "rismc/types.hpp"

namespace rismc {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Hashes a base seed together with an index path (point, trial, ...) into a
/// fresh seed. Distinct paths give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

/// Counter-based generator: output i of stream (seed, stream) is
/// mix64(key + i * golden). Any stream can be reconstructed without replaying
/// another, so parallel trials draw from independent, schedule-free streams.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Independent child stream; does not advance this generator.
  CounterRng substream(std::uint64_t index) const noexcept;

  double uniform();        // [0, 1)
  double uniform_angle();  // [0, 2*pi)
  double normal();         // N(0, 1)
  /// Circularly-symmetric CN(0, 1): real and imaginary parts are N(0, 1/2).
  Complex complex_gaussian();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace rismc
