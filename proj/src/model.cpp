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

#include "rismc/model.hpp"

#include <string>

#include "rismc/errors.hpp"
#include "rismc/rng.hpp"

namespace rismc {

namespace {

int square_factor(int n) {
  int best = 1;
  for (int f = 1; f * f <= n; ++f)
    if (n % f == 0) best = f;
  return best;
}

CMatrix nlos_matrix(int rows, int cols, CounterRng& rng) {
  CMatrix m(rows, cols);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_gaussian();
  return m;
}

CVector nlos_vector(int n, CounterRng& rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
  return v;
}

}  // namespace

SystemDims SystemDims::make(int M, int N, int K) {
  SystemDims d;
  d.M = M;
  d.N = N;
  d.K = K;
  if (M >= 1) {
    d.M1 = square_factor(M);
    d.M2 = M / d.M1;
  }
  if (N >= 1) {
    d.N1 = square_factor(N);
    d.N2 = N / d.N1;
  }
  d.validate();
  return d;
}

void SystemDims::validate() const {
  if (M < 1 || N < 1 || K < 1)
    throw DomainError("SystemDims: M, N, K must all be >= 1");
  if (M1 < 1 || M2 < 1 || N1 < 1 || N2 < 1)
    throw DomainError("SystemDims: array factors must be >= 1");
  if (M1 * M2 != M) throw DomainError("SystemDims: M1*M2 != M");
  if (N1 * N2 != N) throw DomainError("SystemDims: N1*N2 != N");
}

RicianFactor RicianFactor::finite(double b) {
  if (!(b >= 0.0) || !std::isfinite(b))
    throw DomainError("Rician factor must be finite and >= 0 (use pure_los() for the LoS limit)");
  return RicianFactor(b, false);
}

double RicianFactor::los_fraction() const { return pure_los_ ? 1.0 : value_ / (value_ + 1.0); }

double RicianFactor::nlos_fraction() const { return pure_los_ ? 0.0 : 1.0 / (value_ + 1.0); }

LinkAngles LinkAngles::random(int K, CounterRng& rng) {
  auto draw = [&rng] { return ArrayAngles{rng.uniform_angle(), rng.uniform_angle()}; };
  LinkAngles a;
  a.bs_to_ris = draw();
  a.ris_from_bs = draw();
  a.ris_to_user.reserve(K);
  a.bs_to_user.reserve(K);
  for (int k = 0; k < K; ++k) a.ris_to_user.push_back(draw());
  for (int k = 0; k < K; ++k) a.bs_to_user.push_back(draw());
  return a;
}

void RicianParams::validate(int K) const {
  if (!(d_over_lambda > 0.0)) throw DomainError("d_over_lambda must be > 0");
  if (angles) {
    if (static_cast<int>(angles->ris_to_user.size()) != K ||
        static_cast<int>(angles->bs_to_user.size()) != K)
      throw DimensionError("LinkAngles: per-user angle lists must have K entries");
  }
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double Geometry::noise_power_watts() const { return std::pow(10.0, (noise_power_dBm - 30.0) / 10.0); }

void Geometry::validate(int K) const {
  if (static_cast<int>(users.size()) != K)
    throw DimensionError("Geometry: user position count must equal K");
  if (!(distance(bs, ris) > 0.0)) throw DomainError("Geometry: BS and RIS coincide");
  for (const auto& u : users) {
    if (!(distance(bs, u) > 0.0) || !(distance(ris, u) > 0.0))
      throw DomainError("Geometry: a user coincides with the BS or the RIS");
  }
}

ChannelRealization ChannelRealization::from_links(CMatrix H, std::vector<CVector> h,
                                                  std::vector<CVector> t) {
  ChannelRealization ch;
  ch.H = std::move(H);
  ch.h = std::move(h);
  ch.t = std::move(t);
  if (ch.h.size() != ch.t.size()) throw DimensionError("h and t must have one entry per user");
  ch.cascade.reserve(ch.h.size());
  for (const auto& hk : ch.h) {
    if (hk.size() != ch.H.rows()) throw DimensionError("h_k length must equal N");
    ch.cascade.push_back(hk.asDiagonal() * ch.H);
  }
  ch.gains.ris_user.assign(ch.h.size(), 1.0);
  ch.gains.bs_user.assign(ch.h.size(), 1.0);
  ch.validate();
  return ch;
}

ChannelRealization ChannelRealization::select_users(const std::vector<int>& users) const {
  ChannelRealization out;
  out.H = H;
  out.gains.bs_ris = gains.bs_ris;
  for (int k : users) {
    if (k < 0 || k >= K()) throw DomainError("select_users: index out of range");
    out.h.push_back(h[k]);
    out.t.push_back(t[k]);
    out.cascade.push_back(cascade[k]);
    out.gains.ris_user.push_back(gains.ris_user.empty() ? 1.0 : gains.ris_user[k]);
    out.gains.bs_user.push_back(gains.bs_user.empty() ? 1.0 : gains.bs_user[k]);
  }
  return out;
}

void ChannelRealization::validate() const {
  if (H.rows() < 1 || H.cols() < 1) throw DimensionError("H must be non-empty");
  if (h.empty()) throw DimensionError("at least one user is required");
  if (h.size() != t.size() || h.size() != cascade.size())
    throw DimensionError("per-user containers disagree in length");
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k].size() != H.rows()) throw DimensionError("h_k length must equal N");
    if (t[k].size() != H.cols()) throw DimensionError("t_k length must equal M");
    if (cascade[k].rows() != H.rows() || cascade[k].cols() != H.cols())
      throw DimensionError("cascade_k must be N x M");
  }
}

CVector ura_response(int m1, int m2, double omega, double vartheta, double d_over_lambda) {
  if (m1 < 1 || m2 < 1) throw DomainError("ura_response: array factors must be >= 1");
  const double base = kTwoPi * d_over_lambda * std::sin(omega);
  const double kx = base * std::cos(vartheta);
  const double ky = base * std::sin(vartheta);
  CVector a(static_cast<Eigen::Index>(m1) * m2);
  for (int l = 0; l < m2; ++l)
    for (int i = 0; i < m1; ++i) a(i + m1 * l) = unit_phasor(kx * i - ky * l);
  return a;
}

double pathloss_gain(double distance_m) {
  if (!(distance_m > 0.0)) throw DomainError("pathloss_gain: distance must be > 0");
  return std::pow(10.0, -3.75) * std::pow(distance_m, -3.76);
}

ChannelRealization sample_channels(const SystemDims& dims, const RicianParams& params,
                                   const std::optional<Geometry>& geometry) {
  dims.validate();
  params.validate(dims.K);
  if (geometry) geometry->validate(dims.K);

  CounterRng rng(params.seed);
  // Separate streams so that the fading draws do not depend on whether the
  // angles were supplied.
  CounterRng angle_rng = rng.substream(0);
  CounterRng fading_rng = rng.substream(1);

  const LinkAngles angles = params.angles ? *params.angles : LinkAngles::random(dims.K, angle_rng);
  const double dl = params.d_over_lambda;
  const double los = std::sqrt(params.B.los_fraction());
  const double nlos = std::sqrt(params.B.nlos_fraction());
  const bool pure_los = params.B.is_pure_los();

  auto bs_array = [&](ArrayAngles a) { return ura_response(dims.M1, dims.M2, a.omega, a.vartheta, dl); };
  auto ris_array = [&](ArrayAngles a) { return ura_response(dims.N1, dims.N2, a.omega, a.vartheta, dl); };

  CMatrix H = ris_array(angles.ris_from_bs) * bs_array(angles.bs_to_ris).adjoint();
  if (pure_los) {
    // no scattered component at all
  } else {
    H = los * H + nlos * nlos_matrix(dims.N, dims.M, fading_rng);
  }

  std::vector<CVector> h, t;
  h.reserve(dims.K);
  t.reserve(dims.K);
  for (int k = 0; k < dims.K; ++k) {
    CVector hk = ris_array(angles.ris_to_user[k]);
    if (!pure_los) hk = los * hk + nlos * nlos_vector(dims.N, fading_rng);
    h.push_back(std::move(hk));
  }
  for (int k = 0; k < dims.K; ++k) {
    CVector tk = bs_array(angles.bs_to_user[k]);
    if (!pure_los) tk = los * tk + nlos * nlos_vector(dims.M, fading_rng);
    t.push_back(std::move(tk));
  }

  ChannelRealization::Gains gains;
  gains.ris_user.assign(dims.K, 1.0);
  gains.bs_user.assign(dims.K, 1.0);
  if (geometry) {
    const double noise_std = std::sqrt(geometry->noise_power_watts());
    gains.bs_ris = std::sqrt(pathloss_gain(distance(geometry->bs, geometry->ris)));
    H *= gains.bs_ris;
    for (int k = 0; k < dims.K; ++k) {
      gains.ris_user[k] = std::sqrt(pathloss_gain(distance(geometry->ris, geometry->users[k]))) / noise_std;
      gains.bs_user[k] = std::sqrt(pathloss_gain(distance(geometry->bs, geometry->users[k]))) / noise_std;
      h[k] *= gains.ris_user[k];
      t[k] *= gains.bs_user[k];
    }
  }

  ChannelRealization ch = ChannelRealization::from_links(std::move(H), std::move(h), std::move(t));
  ch.gains = std::move(gains);
  return ch;
}

}  // namespace rismc
