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

#include "rismc/krawczyk.hpp"

#include <algorithm>
#include <cmath>

#include "rismc/errors.hpp"

namespace rismc {

double TrigSystem::scale() const {
  double s = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  if (b.size()) s = std::max(s, b.cwiseAbs().maxCoeff());
  return s;
}

bool TrigSystem::is_shift_invariant() const {
  const double s = scale();
  return s > 0.0 && c.cwiseAbs().maxCoeff() <= 1e-12 * s;
}

RVector TrigSystem::residual(const RVector& theta) const {
  const int n = N();
  RVector r(n);
  for (int i = 0; i < n; ++i) {
    double v = c(i) * std::sin(theta(i) + omega(i));
    for (int j = 0; j < n; ++j)
      if (j != i) v += b(i, j) * std::sin(theta(i) - theta(j) + psi(i, j));
    r(i) = v;
  }
  return r;
}

RMatrix TrigSystem::jacobian(const RVector& theta) const {
  const int n = N();
  RMatrix J = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double d = c(i) * std::cos(theta(i) + omega(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = b(i, j) * std::cos(theta(i) - theta(j) + psi(i, j));
      d += v;
      J(i, j) = -v;
    }
    J(i, i) = d;
  }
  return J;
}

IntervalVector TrigSystem::residual(const IntervalVector& theta) const {
  const int n = N();
  IntervalVector r(n);
  for (int i = 0; i < n; ++i) {
    Interval v = Interval(c(i)) * sin(theta[i] + Interval(omega(i)));
    for (int j = 0; j < n; ++j)
      if (j != i) v += Interval(b(i, j)) * sin(theta[i] - theta[j] + Interval(psi(i, j)));
    r[i] = v;
  }
  return r;
}

std::vector<IntervalVector> TrigSystem::jacobian(const IntervalVector& theta) const {
  const int n = N();
  std::vector<IntervalVector> J(n, IntervalVector(n, Interval(0.0)));
  for (int i = 0; i < n; ++i) {
    Interval d = Interval(c(i)) * cos(theta[i] + Interval(omega(i)));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Interval v = Interval(b(i, j)) * cos(theta[i] - theta[j] + Interval(psi(i, j)));
      d += v;
      J[i][j] = -v;
    }
    J[i][i] = d;
  }
  return J;
}

namespace {

/// The system restricted to free coordinates; with a gauge, theta_0 = 0 and
/// equation 0 is dropped (it is minus the sum of the others).
class Reduced {
 public:
  Reduced(const TrigSystem& sys, bool gauge) : sys_(sys), gauge_(gauge) {}
  int dim() const { return sys_.N() - (gauge_ ? 1 : 0); }

  RVector full(const RVector& x) const {
    if (!gauge_) return x;
    RVector th(sys_.N());
    th(0) = 0.0;
    th.tail(dim()) = x;
    return th;
  }
  IntervalVector full(const IntervalVector& x) const {
    if (!gauge_) return x;
    IntervalVector th;
    th.reserve(sys_.N());
    th.push_back(Interval(0.0));
    th.insert(th.end(), x.begin(), x.end());
    return th;
  }
  RVector residual(const RVector& x) const {
    const RVector r = sys_.residual(full(x));
    return gauge_ ? RVector(r.tail(dim())) : r;
  }
  RMatrix jacobian(const RVector& x) const {
    const RMatrix J = sys_.jacobian(full(x));
    return gauge_ ? RMatrix(J.bottomRightCorner(dim(), dim())) : J;
  }
  IntervalVector residual(const IntervalVector& x) const {
    IntervalVector r = sys_.residual(full(x));
    if (gauge_) r.erase(r.begin());
    return r;
  }
  std::vector<IntervalVector> jacobian(const IntervalVector& x) const {
    auto J = sys_.jacobian(full(x));
    if (gauge_) {
      J.erase(J.begin());
      for (auto& row : J) row.erase(row.begin());
    }
    return J;
  }

 private:
  const TrigSystem& sys_;
  bool gauge_;
};

bool newton_polish(const Reduced& sys, const IntervalVector& box, RVector& x, double tol) {
  for (int it = 0; it < 60; ++it) {
    const RVector r = sys.residual(x);
    if (r.norm() <= tol * 1e-3) break;
    const RVector dx = sys.jacobian(x).fullPivLu().solve(r);
    if (!dx.allFinite()) break;
    RVector next = x - dx;
    for (int i = 0; i < x.size(); ++i) next(i) = std::clamp(next(i), box[i].lo(), box[i].hi());
    x = next;
  }
  return sys.residual(x).norm() <= tol;
}

bool same_root(const RVector& a, const RVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d = std::fabs(a(i) - b(i));
    d = std::min(d, kTwoPi - d);
    if (d > 1e-7) return false;
  }
  return true;
}

void add_root(std::vector<RVector>& roots, RVector th) {
  for (Eigen::Index i = 0; i < th.size(); ++i) th(i) = wrap_angle(th(i));
  for (const auto& r : roots)
    if (same_root(r, th)) return;
  roots.push_back(std::move(th));
}

}  // namespace

KrawczykResult krawczyk_solve(const TrigSystem& input, const KrawczykOptions& opt) {
  const int n_full = input.N();
  if (n_full < 1) throw DimensionError("krawczyk_solve: empty system");
  if (input.b.rows() != n_full || input.b.cols() != n_full || input.psi.rows() != n_full ||
      input.psi.cols() != n_full || input.omega.size() != n_full)
    throw DimensionError("krawczyk_solve: coefficient shapes disagree");
  if (!(opt.lo < opt.hi)) throw DomainError("krawczyk_solve: empty search box");

  KrawczykResult res;
  const double s = input.scale();
  if (s == 0.0) {
    res.degenerate = true;
    return res;
  }
  TrigSystem sys = input;
  sys.b /= s;
  sys.c /= s;
  res.gauge_fixed = sys.is_shift_invariant();
  if (res.gauge_fixed) sys.c.setZero();
  const Reduced red(sys, res.gauge_fixed);
  const int n = red.dim();
  if (n == 0) {
    // One element, no direct term: nothing depends on theta.
    res.degenerate = true;
    return res;
  }

  std::vector<IntervalVector> stack{IntervalVector(n, Interval(opt.lo, opt.hi))};
  const double min_width = 1e-10;
  while (!stack.empty()) {
    if (res.boxes >= opt.max_boxes) {
      res.partial = true;
      break;
    }
    IntervalVector X = std::move(stack.back());
    stack.pop_back();
    ++res.boxes;

    const IntervalVector FX = red.residual(X);
    bool excluded = false;
    for (const auto& f : FX)
      if (!f.contains_zero()) excluded = true;
    if (excluded) continue;

    RVector m(n);
    double widest = 0.0;
    int split = 0;
    for (int i = 0; i < n; ++i) {
      m(i) = X[i].mid();
      if (X[i].width() > widest) {
        widest = X[i].width();
        split = i;
      }
    }

    const RMatrix Jm = red.jacobian(m);
    Eigen::FullPivLU<RMatrix> lu(Jm);
    bool contracted = false;
    if (lu.isInvertible() && lu.rcond() > 1e-13) {
      const RMatrix Y = lu.inverse();
      IntervalVector rm(n);
      {
        IntervalVector mi(n);
        for (int i = 0; i < n; ++i) mi[i] = Interval(m(i));
        rm = red.residual(mi);
      }
      const auto JX = red.jacobian(X);
      IntervalVector Kx(n);
      bool inside = true;
      bool empty = false;
      IntervalVector next(n);
      for (int i = 0; i < n; ++i) {
        Interval acc(m(i));
        for (int j = 0; j < n; ++j) acc = acc - Interval(Y(i, j)) * rm[j];
        for (int j = 0; j < n; ++j) {
          // (I - Y J(X))_{ij}
          Interval e(i == j ? 1.0 : 0.0);
          for (int l = 0; l < n; ++l) e = e - Interval(Y(i, l)) * JX[l][j];
          acc += e * (X[j] - Interval(m(j)));
        }
        Kx[i] = acc;
        if (!X[i].interior_contains(acc)) inside = false;
        if (!intersect(acc, X[i], next[i])) empty = true;
      }
      if (empty) continue;
      if (inside) {
        RVector x = m;
        if (newton_polish(red, X, x, opt.residual_tol)) {
          add_root(res.roots, red.full(x));
        } else {
          ++res.uncertified;
        }
        continue;
      }
      // Keep contracting while it pays off; bisect otherwise.
      double old_vol = 0.0, new_vol = 0.0;
      for (int i = 0; i < n; ++i) {
        old_vol = std::max(old_vol, X[i].width());
        new_vol = std::max(new_vol, next[i].width());
      }
      if (new_vol < 0.7 * old_vol) {
        stack.push_back(std::move(next));
        contracted = true;
      } else {
        X = std::move(next);
        widest = 0.0;
        for (int i = 0; i < n; ++i) {
          if (X[i].width() > widest) {
            widest = X[i].width();
            split = i;
          }
        }
      }
    }
    if (contracted) continue;
    if (widest < min_width) {
      RVector x(n);
      for (int i = 0; i < n; ++i) x(i) = X[i].mid();
      if (red.residual(x).norm() <= opt.residual_tol) add_root(res.roots, red.full(x));
      ++res.uncertified;
      continue;
    }
    // Off-center split keeps symmetric roots away from box faces.
    const double cut = X[split].lo() + 0.5123 * X[split].width();
    IntervalVector left = X, right = X;
    left[split] = Interval(X[split].lo(), cut);
    right[split] = Interval(cut, X[split].hi());
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  std::sort(res.roots.begin(), res.roots.end(), [](const RVector& a, const RVector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return res;
}

}  // namespace rismc
