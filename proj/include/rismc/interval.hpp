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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rismc {

/// Closed real interval with outward rounding: every operation widens its
/// floating-point result by one ulp on each side, so the true value set is
/// always enclosed.
class Interval {
 public:
  Interval() = default;
  Interval(double v) : lo_(v), hi_(v) {}  // NOLINT(google-explicit-constructor)
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  double width() const { return hi_ - lo_; }
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  bool contains(double v) const { return lo_ <= v && v <= hi_; }
  bool contains_zero() const { return contains(0.0); }
  /// Strict containment of `inner` inside this interval.
  bool interior_contains(const Interval& inner) const { return lo_ < inner.lo_ && inner.hi_ < hi_; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend Interval operator*(const Interval& a, const Interval& b);
  Interval& operator+=(const Interval& b) { return *this = *this + b; }

  friend Interval sin(const Interval& x);
  friend Interval cos(const Interval& x);
  /// Empty result is reported through the return flag.
  friend bool intersect(const Interval& a, const Interval& b, Interval& out);

 private:
  static Interval outward(double lo, double hi);
  double lo_ = 0.0;
  double hi_ = 0.0;
};

using IntervalVector = std::vector<Interval>;

}  // namespace rismc
