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
#include <optional>
#include <vector>

#include "rismc/types.hpp"

namespace rismc {

/// Antenna count M at the BS, reflecting elements N, users K, and the
/// uniform-rectangular-array factorizations M = M1*M2, N = N1*N2.
struct SystemDims {
  int M = 1;
  int N = 1;
  int K = 1;
  int M1 = 1, M2 = 1;
  int N1 = 1, N2 = 1;

  /// Picks the most square factorizations for both arrays.
  static SystemDims make(int M, int N, int K);
  void validate() const;
};

/// Rician factor B. The pure line-of-sight limit is a flag so that the
/// weights sqrt(B/(B+1)) and sqrt(1/(B+1)) never see infinity.
class RicianFactor {
 public:
  static RicianFactor finite(double b);
  static RicianFactor pure_los() { return RicianFactor(0.0, true); }

  bool is_pure_los() const { return pure_los_; }
  double value() const { return value_; }
  /// B / (B + 1); 1 for pure LoS.
  double los_fraction() const;
  /// 1 / (B + 1); 0 for pure LoS.
  double nlos_fraction() const;

 private:
  RicianFactor(double v, bool los) : value_(v), pure_los_(los) {}
  double value_;
  bool pure_los_;
};

/// (omega, vartheta) pair of one array response, radians.
struct ArrayAngles {
  double omega = 0.0;
  double vartheta = 0.0;
};

/// Angles for every line-of-sight component of one realization.
struct LinkAngles {
  ArrayAngles bs_to_ris;  // departure at the BS array (H)
  ArrayAngles ris_from_bs;  // arrival at the RIS (H)
  std::vector<ArrayAngles> ris_to_user;  // departure at the RIS (h_k)
  std::vector<ArrayAngles> bs_to_user;   // departure at the BS (t_k)

  /// Uniform on [0, 2*pi) for every angle.
  static LinkAngles random(int K, class CounterRng& rng);
};

struct RicianParams {
  RicianFactor B = RicianFactor::finite(1.0);
  double d_over_lambda = 1.0;
  /// When empty, every angle is drawn uniformly from [0, 2*pi).
  std::optional<LinkAngles> angles;
  std::uint64_t seed = 0;

  void validate(int K) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

/// Far-field placement for path-loss scaling. Noise power normalizes the
/// channels so that the receiver noise variance is one.
struct Geometry {
  Point2 bs;
  Point2 ris;
  std::vector<Point2> users;
  double noise_power_dBm = -80.0;

  double noise_power_watts() const;
  void validate(int K) const;
};

/// All channel coefficients for one draw. `h[k]` carries the entries h_{k,n}
/// placed on the diagonal of G_k, `t[k]` is the direct-link column vector
/// t_k (the user sees t_k^H), and `cascade[k] = diag(h[k]) * H`.
struct ChannelRealization {
  CMatrix H;                     // N x M
  std::vector<CVector> h;        // K x (N)
  std::vector<CVector> t;        // K x (M)
  std::vector<CMatrix> cascade;  // K x (N x M)

  struct Gains {
    double bs_ris = 1.0;
    std::vector<double> ris_user;
    std::vector<double> bs_user;
  } gains;

  int M() const { return static_cast<int>(H.cols()); }
  int N() const { return static_cast<int>(H.rows()); }
  int K() const { return static_cast<int>(h.size()); }

  /// Builds the cascades from separate links, checking shapes.
  static ChannelRealization from_links(CMatrix H, std::vector<CVector> h, std::vector<CVector> t);

  /// Realization whose users are this one's users at the given indices.
  ChannelRealization select_users(const std::vector<int>& users) const;

  void validate() const;
};

/// URA response vec(a_{M1} a_{M2}^H), entries
/// exp(j*2*pi*(d/lambda)*sin(omega)*(i*cos(vartheta) - l*sin(vartheta))) at
/// column-stacked index i + m1*l.
CVector ura_response(int m1, int m2, double omega, double vartheta, double d_over_lambda);

/// Large-scale power gain 10^-3.75 / d^3.76 (d in meters).
double pathloss_gain(double distance_m);

/// Draws one Rician realization. With geometry, each link is scaled by the
/// square root of its path loss and the user-side links are divided by the
/// noise standard deviation.
ChannelRealization sample_channels(const SystemDims& dims, const RicianParams& params,
                                   const std::optional<Geometry>& geometry = std::nullopt);

}  // namespace rismc
