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

#include "rismc/sdp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rismc/errors.hpp"

namespace rismc::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Barrier evaluation for one (t, x): value, gradient and Hessian of
/// t c^T x - sum log(slack) - sum log det F(x). Constraint data is
/// flattened once at construction.
class Barrier {
 public:
  explicit Barrier(const ConicProblem& p) : p_(p) {
    const int n = p.num_vars;
    A_.resize(static_cast<Eigen::Index>(p.linear.size()), n);
    b_.resize(static_cast<Eigen::Index>(p.linear.size()));
    for (std::size_t i = 0; i < p.linear.size(); ++i) {
      A_.row(static_cast<Eigen::Index>(i)) = p.linear[i].a.transpose();
      b_(static_cast<Eigen::Index>(i)) = p.linear[i].b;
    }
    for (const auto& lmi : p.lmis) {
      Grouped gr;
      std::vector<std::vector<LmiTerm>> by_var(n);
      for (const auto& term : lmi.terms) by_var[term.var].push_back(term);
      for (int v = 0; v < n; ++v) {
        if (by_var[v].empty()) continue;
        gr.vars.push_back(v);
        gr.terms.push_back(std::move(by_var[v]));
      }
      groups_.push_back(std::move(gr));
    }
  }

  /// Returns +inf when x is not strictly feasible.
  double value(const RVector& x, double t) const {
    double f = t * p_.c.dot(x);
    if (A_.rows() > 0) {
      const RVector s = b_ - A_ * x;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!(s(i) > 0.0)) return kInf;
        f -= std::log(s(i));
      }
    }
    for (const auto& lmi : p_.lmis) {
      Eigen::LLT<CMatrix> llt(lmi.evaluate(x));
      if (llt.info() != Eigen::Success) return kInf;
      const auto& L = llt.matrixLLT();
      for (Eigen::Index i = 0; i < L.rows(); ++i) {
        const double d = L(i, i).real();
        if (!(d > 0.0)) return kInf;
        f -= 2.0 * std::log(d);
      }
    }
    return std::isfinite(f) ? f : kInf;
  }

  void derivatives(const RVector& x, double t, RVector& g, RMatrix& Hs) const {
    const int n = p_.num_vars;
    g = t * p_.c;
    Hs.setZero(n, n);
    if (A_.rows() > 0) {
      const RVector inv = (b_ - A_ * x).cwiseInverse();
      g.noalias() += A_.transpose() * inv;
      const RMatrix As = inv.asDiagonal() * A_;
      Hs.noalias() += As.transpose() * As;
    }
    for (std::size_t li = 0; li < p_.lmis.size(); ++li) {
      const LmiConstraint& lmi = p_.lmis[li];
      const Grouped& gr = groups_[li];
      const int m = lmi.size();
      const CMatrix W = lmi.evaluate(x).llt().solve(CMatrix::Identity(m, m));
      const std::size_t nv = gr.vars.size();
      for (std::size_t a = 0; a < nv; ++a) {
        Complex tr = 0.0;
        for (const LmiTerm& term : gr.terms[a]) tr += W(term.col, term.row) * term.value;
        g(gr.vars[a]) -= tr.real();
      }
      CMatrix Z(m, m);
      for (std::size_t a = 0; a < nv; ++a) {
        Z.setZero();
        for (const LmiTerm& term : gr.terms[a]) Z.noalias() += term.value * W.col(term.row) * W.row(term.col);
        for (std::size_t b = a; b < nv; ++b) {
          Complex tr = 0.0;
          for (const LmiTerm& term : gr.terms[b]) tr += Z(term.col, term.row) * term.value;
          Hs(gr.vars[a], gr.vars[b]) += tr.real();
          if (b != a) Hs(gr.vars[b], gr.vars[a]) += tr.real();
        }
      }
    }
  }

 private:
  struct Grouped {
    std::vector<int> vars;
    std::vector<std::vector<LmiTerm>> terms;
  };
  const ConicProblem& p_;
  RMatrix A_;
  RVector b_;
  std::vector<Grouped> groups_;
};

struct CenterResult {
  RVector x;
  int steps = 0;
  bool hit_limit = false;
};

/// Damped Newton centering. `early_exit` is polled after each step.
template <class Stop>
CenterResult center(const Barrier& barrier, RVector x, double t, int budget, Stop early_exit) {
  CenterResult r;
  double f = barrier.value(x, t);
  RVector g;
  RMatrix Hs;
  const double reg_floor = 1e-14;
  while (true) {
    if (r.steps >= budget) {
      r.hit_limit = true;
      break;
    }
    barrier.derivatives(x, t, g, Hs);
    if (!g.allFinite() || !Hs.allFinite()) {
      throw NumericalBreakdown("sdp: non-finite barrier derivatives",
                               std::vector<double>(x.data(), x.data() + x.size()));
    }
    Eigen::LDLT<RMatrix> ldlt(Hs);
    RVector dx = -ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !dx.allFinite() || g.dot(dx) >= 0.0) {
      const double reg = std::max(reg_floor, 1e-10 * Hs.diagonal().cwiseAbs().maxCoeff());
      dx = -(Hs + reg * RMatrix::Identity(Hs.rows(), Hs.cols())).llt().solve(g);
    }
    if (!dx.allFinite()) {
      throw NumericalBreakdown("sdp: non-finite Newton step", std::vector<double>(x.data(), x.data() + x.size()));
    }
    const double decrement = -g.dot(dx);
    // Below this the decrease is lost in the rounding of f itself.
    if (decrement * 0.5 <= std::max(1e-10, 1e-13 * std::fabs(f))) break;
    double step = 1.0;
    double f_new = barrier.value(x + step * dx, t);
    while (f_new > f - 0.25 * step * decrement) {
      step *= 0.5;
      if (step < 1e-14) break;
      f_new = barrier.value(x + step * dx, t);
    }
    if (step < 1e-14 || !(f_new < f)) break;  // no further progress representable
    x += step * dx;
    f = f_new;
    ++r.steps;
    if (early_exit(x)) break;
  }
  r.x = std::move(x);
  return r;
}

double lmi_min_eig(const LmiConstraint& lmi, const RVector& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(lmi.evaluate(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Phase I: finds a strictly feasible point or reports infeasibility.
bool phase_one(const ConicProblem& p, const Options& opt, RVector& x_out, int& steps) {
  const int n = p.num_vars;
  RVector x0 = p.x0.size() == n ? p.x0 : RVector::Zero(n);
  double s0 = 0.0;
  for (const auto& lc : p.linear) s0 = std::max(s0, lc.a.dot(x0) - lc.b);
  for (const auto& lmi : p.lmis) s0 = std::max(s0, -lmi_min_eig(lmi, x0));
  s0 += 1.0;

  ConicProblem aux;
  aux.num_vars = n + 1;
  aux.c = RVector::Zero(n + 1);
  aux.c(n) = 1.0;
  for (const auto& lc : p.linear) {
    RVector a(n + 1);
    a << lc.a, -1.0;
    aux.linear.push_back({a, lc.b});
  }
  const double box = std::max(opt.phase1_box, 10.0 * (x0.cwiseAbs().maxCoeff() + 1.0));
  for (int i = 0; i < n; ++i) {
    RVector a = RVector::Zero(n + 1);
    a(i) = 1.0;
    aux.linear.push_back({a, box});
    a(i) = -1.0;
    aux.linear.push_back({a, box});
  }
  {
    RVector a = RVector::Zero(n + 1);
    a(n) = -1.0;
    aux.linear.push_back({a, 1.0});
  }
  for (const auto& lmi : p.lmis) {
    LmiConstraint l = lmi;
    for (int i = 0; i < l.size(); ++i) l.add(n, i, i, 1.0);
    aux.lmis.push_back(std::move(l));
  }
  RVector x(n + 1);
  x << x0, s0;
  const Barrier barrier(aux);
  for (double t = opt.t0; 1.0 / t > opt.tol * 1e-2; t *= opt.mu) {
    auto found = [&](const RVector& z) { return z(n) < 0.0 && p.strictly_feasible(z.head(n)); };
    CenterResult cr = center(barrier, x, t, opt.max_iters - steps, found);
    steps += cr.steps;
    x = cr.x;
    if (found(x)) {
      x_out = x.head(n);
      return true;
    }
    if (cr.hit_limit) break;
  }
  return false;
}

}  // namespace

void LmiConstraint::add_hermitian(int var, int row, int col, Complex value) {
  if (row == col) {
    add(var, row, col, Complex(value.real(), 0.0));
  } else {
    add(var, row, col, value);
    add(var, col, row, std::conj(value));
  }
}

CMatrix LmiConstraint::evaluate(const RVector& x) const {
  CMatrix F = F0;
  for (const auto& term : terms) F(term.row, term.col) += x(term.var) * term.value;
  return F;
}

void ConicProblem::validate() const {
  if (num_vars < 1) throw DimensionError("sdp: at least one variable required");
  if (c.size() != num_vars) throw DimensionError("sdp: objective length must equal num_vars");
  for (const auto& lc : linear)
    if (lc.a.size() != num_vars) throw DimensionError("sdp: linear constraint length mismatch");
  for (const auto& lmi : lmis) {
    if (lmi.F0.rows() != lmi.F0.cols() || lmi.F0.rows() < 1) throw DimensionError("sdp: LMI must be square");
    if ((lmi.F0 - lmi.F0.adjoint()).norm() > 1e-12 * std::max(1.0, lmi.F0.norm()))
      throw InvariantError("sdp: LMI constant term is not Hermitian");
    std::vector<CMatrix> coeffs;
    for (const auto& term : lmi.terms) {
      if (term.var < 0 || term.var >= num_vars) throw DimensionError("sdp: LMI term variable out of range");
      if (term.row < 0 || term.row >= lmi.size() || term.col < 0 || term.col >= lmi.size())
        throw DimensionError("sdp: LMI term position out of range");
    }
    // Each coefficient matrix must be Hermitian.
    for (int v = 0; v < num_vars; ++v) {
      RVector e = RVector::Zero(num_vars);
      e(v) = 1.0;
      const CMatrix Fv = lmi.evaluate(e) - lmi.F0;
      if ((Fv - Fv.adjoint()).norm() > 1e-12 * std::max(1.0, Fv.norm()))
        throw InvariantError("sdp: LMI coefficient matrix is not Hermitian");
    }
  }
  if (x0.size() != 0 && x0.size() != num_vars) throw DimensionError("sdp: x0 length mismatch");
}

int ConicProblem::barrier_degree() const {
  int m = static_cast<int>(linear.size());
  for (const auto& lmi : lmis) m += lmi.size();
  return m;
}

bool ConicProblem::strictly_feasible(const RVector& x) const {
  for (const auto& lc : linear)
    if (!(lc.b - lc.a.dot(x) > 0.0)) return false;
  for (const auto& lmi : lmis) {
    Eigen::LLT<CMatrix> llt(lmi.evaluate(x));
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::max_iterations: return "max_iterations";
    case Status::infeasible: return "infeasible";
  }
  return "unknown";
}

ConicSolution solve(const ConicProblem& problem, const Options& options) {
  problem.validate();
  if (!(options.tol > 0.0) || !(options.mu > 1.0) || !(options.t0 > 0.0))
    throw DomainError("sdp: invalid options");
  ConicSolution sol;
  RVector x;
  int steps = 0;
  if (problem.x0.size() == problem.num_vars && problem.strictly_feasible(problem.x0)) {
    x = problem.x0;
  } else if (!phase_one(problem, options, x, steps)) {
    sol.status = Status::infeasible;
    sol.iterations = steps;
    sol.x = problem.x0.size() == problem.num_vars ? problem.x0 : RVector::Zero(problem.num_vars);
    sol.objective = problem.c.dot(sol.x);
    return sol;
  }
  double t = options.t0;
  const int degree = problem.barrier_degree();
  sol.status = Status::optimal;
  const Barrier barrier(problem);
  while (true) {
    CenterResult cr = center(barrier, x, t, options.max_iters - steps, [](const RVector&) { return false; });
    steps += cr.steps;
    x = cr.x;
    sol.stage_objectives.push_back(problem.c.dot(x));
    if (cr.hit_limit) {
      sol.status = Status::max_iterations;
      break;
    }
    if (1.0 / t <= options.tol) break;
    t *= options.mu;
  }
  sol.x = x;
  sol.objective = problem.c.dot(x);
  sol.barrier_param = 1.0 / t;
  sol.gap_bound = degree / t;
  sol.iterations = steps;
  return sol;
}

ConicSolution solve(const ConicProblem& problem, double tol, int max_iters) {
  Options o;
  o.tol = tol;
  o.max_iters = max_iters;
  return solve(problem, o);
}

CMatrix HermitianBasis::to_matrix(const RVector& x) const {
  CMatrix X(r_, r_);
  int idx = offset_;
  for (int i = 0; i < r_; ++i) X(i, i) = x(idx++);
  for (int i = 0; i < r_; ++i) {
    for (int j = i + 1; j < r_; ++j) {
      X(i, j) = Complex(x(idx), x(idx + 1));
      X(j, i) = std::conj(X(i, j));
      idx += 2;
    }
  }
  return X;
}

void HermitianBasis::from_matrix(const CMatrix& X, RVector& x) const {
  int idx = offset_;
  for (int i = 0; i < r_; ++i) x(idx++) = X(i, i).real();
  for (int i = 0; i < r_; ++i) {
    for (int j = i + 1; j < r_; ++j) {
      const Complex z = 0.5 * (X(i, j) + std::conj(X(j, i)));
      x(idx++) = z.real();
      x(idx++) = z.imag();
    }
  }
}

RVector HermitianBasis::trace_functional(const CMatrix& R) const {
  // Tr(R X) = sum_i R_ii X_ii + sum_{i<j} 2 Re(R_ji X_ij).
  RVector a(size());
  int idx = 0;
  for (int i = 0; i < r_; ++i) a(idx++) = R(i, i).real();
  for (int i = 0; i < r_; ++i) {
    for (int j = i + 1; j < r_; ++j) {
      const Complex rji = 0.5 * (R(j, i) + std::conj(R(i, j)));
      a(idx++) = 2.0 * rji.real();
      a(idx++) = -2.0 * rji.imag();
    }
  }
  return a;
}

void HermitianBasis::add_to_lmi(LmiConstraint& lmi, int r0, double scale) const {
  int idx = offset_;
  for (int i = 0; i < r_; ++i) lmi.add(idx++, r0 + i, r0 + i, scale);
  for (int i = 0; i < r_; ++i) {
    for (int j = i + 1; j < r_; ++j) {
      lmi.add_hermitian(idx++, r0 + i, r0 + j, Complex(scale, 0.0));
      lmi.add_hermitian(idx++, r0 + i, r0 + j, Complex(0.0, scale));
    }
  }
}

MaxMinResult maxmin_q_step(const std::vector<CMatrix>& R_list, double p_max, const Options& options) {
  if (R_list.empty()) throw DimensionError("maxmin_q_step: at least one constraint matrix required");
  if (!(p_max > 0.0)) throw DomainError("maxmin_q_step: p_max must be > 0");
  const int M = static_cast<int>(R_list.front().rows());
  for (const auto& R : R_list)
    if (R.rows() != M || R.cols() != M) throw DimensionError("maxmin_q_step: R_k must be M x M");

  // The optimum lies in the span of the R_k ranges: components outside it
  // spend power without raising any Tr(R_k Q).
  CMatrix S = CMatrix::Zero(M, M);
  double scale = 0.0;
  for (const auto& R : R_list) {
    S += R;
    scale = std::max(scale, R.trace().real());
  }
  MaxMinResult out;
  if (!(scale > 0.0)) {
    out.Q = TransmitCovariance::scaled_identity(M, p_max);
    out.gamma = 0.0;
    out.solution.status = Status::optimal;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (S + S.adjoint()));
  const double ev_max = es.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < M; ++i)
    if (es.eigenvalues()(i) > 1e-12 * ev_max) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  CMatrix B(M, r);
  for (int i = 0; i < r; ++i) B.col(i) = es.eigenvectors().col(keep[i]);

  std::vector<CMatrix> Rr;
  Rr.reserve(R_list.size());
  for (const auto& R : R_list) Rr.push_back(B.adjoint() * (R / scale) * B);

  // Variables: Hermitian Qn (r x r, Tr Qn <= 1) followed by gamma.
  HermitianBasis basis(r);
  const int n = basis.size() + 1;
  const int ig = n - 1;
  ConicProblem prob;
  prob.num_vars = n;
  prob.c = RVector::Zero(n);
  prob.c(ig) = -1.0;
  for (const auto& R : Rr) {
    RVector a = RVector::Zero(n);
    a.head(basis.size()) = -basis.trace_functional(R);
    a(ig) = 1.0;
    prob.linear.push_back({a, 0.0});
  }
  {
    RVector a = RVector::Zero(n);
    a.head(basis.size()) = basis.trace_functional(CMatrix::Identity(r, r));
    prob.linear.push_back({a, 1.0});
  }
  LmiConstraint psd;
  psd.F0 = CMatrix::Zero(r, r);
  basis.add_to_lmi(psd, 0);
  prob.lmis.push_back(std::move(psd));

  prob.x0 = RVector::Zero(n);
  const CMatrix Q0 = CMatrix::Identity(r, r) / (2.0 * r);
  basis.from_matrix(Q0, prob.x0);
  double g0 = kInf;
  for (const auto& R : Rr) g0 = std::min(g0, (R * Q0).trace().real());
  prob.x0(ig) = 0.5 * g0 - 1e-3;

  out.solution = solve(prob, options);
  const CMatrix Qn = basis.to_matrix(out.solution.x);
  CMatrix Q = p_max * B * Qn * B.adjoint();
  Q = 0.5 * (Q + Q.adjoint());
  out.Q = {Q, p_max};
  out.gamma = kInf;
  for (const auto& R : R_list) out.gamma = std::min(out.gamma, std::max(0.0, (R * Q).trace().real()));
  return out;
}

}  // namespace rismc::sdp
