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

#include "rismc/interval.hpp"

#include "rismc/errors.hpp"
#include "rismc/types.hpp"

namespace rismc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw DomainError("Interval: lower bound exceeds upper bound");
}

Interval Interval::outward(double lo, double hi) {
  Interval r;
  r.lo_ = std::nextafter(lo, -kInf);
  r.hi_ = std::nextafter(hi, kInf);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) { return Interval::outward(a.lo_ + b.lo_, a.hi_ + b.hi_); }

Interval operator-(const Interval& a, const Interval& b) { return Interval::outward(a.lo_ - b.hi_, a.hi_ - b.lo_); }

Interval operator-(const Interval& a) {
  Interval r;
  r.lo_ = -a.hi_;
  r.hi_ = -a.lo_;
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const double p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  return Interval::outward(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval sin(const Interval& x) {
  if (x.width() >= kTwoPi) return Interval(-1.0, 1.0);
  double lo = std::min(std::sin(x.lo_), std::sin(x.hi_));
  double hi = std::max(std::sin(x.lo_), std::sin(x.hi_));
  // Maxima at pi/2 + 2 pi k, minima at -pi/2 + 2 pi k. The quotient is
  // evaluated conservatively: a critical point counted when it may be inside.
  const double kmax_lo = std::ceil((x.lo_ - kPi / 2) / kTwoPi - 1e-12);
  if (kPi / 2 + kmax_lo * kTwoPi <= x.hi_ + 1e-12) hi = 1.0;
  const double kmin_lo = std::ceil((x.lo_ + kPi / 2) / kTwoPi - 1e-12);
  if (-kPi / 2 + kmin_lo * kTwoPi <= x.hi_ + 1e-12) lo = -1.0;
  Interval r = Interval::outward(lo, hi);
  r.lo_ = std::max(r.lo_, -1.0);
  r.hi_ = std::min(r.hi_, 1.0);
  return r;
}

Interval cos(const Interval& x) {
  // cos(x) = sin(x + pi/2); the shift itself is rounded outward.
  return sin(x + Interval(kPi / 2));
}

bool intersect(const Interval& a, const Interval& b, Interval& out) {
  const double lo = std::max(a.lo_, b.lo_);
  const double hi = std::min(a.hi_, b.hi_);
  if (lo > hi) return false;
  out.lo_ = lo;
  out.hi_ = hi;
  return true;
}

}  // namespace rismc
