// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "rmimo/rng.hpp"
#include "rmimo/types.hpp"

namespace rmimo {

/// One realization of the Ricean channel.
///   los       deterministic steering component (unit-modulus entries)
///   scatter   i.i.d. complex Gaussian component
///   fading    K-factor mixture of los and scatter
///   channel   fading weighted by the per-user large-scale gains
struct ChannelDraw {
  CMatrix los;
  CMatrix scatter;
  CMatrix fading;
  CMatrix channel;
};

/// Deterministic phase-ramp matrix of a uniform linear array:
/// entry (m, n) = exp(-j * m * 2*pi*spacing_ratio * sin(theta_n)).
CMatrix steering_matrix(const SystemGeometry& geometry);

/// Signed amplitude of the inner product between two steering columns at
/// half-wavelength spacing (a Dirichlet kernel in sin(theta_a) - sin(theta_b)).
/// The removable singularities at coinciding column phases resolve to
/// +/- antennas.
double steering_overlap(double theta_a, double theta_b, int antennas);

/// Gram matrix of the steering columns at half-wavelength spacing, built from
/// the closed form: diagonal entries equal the antenna count, off-diagonal
/// entries are steering_overlap times a deterministic phase.
CMatrix steering_gram(int antennas, const Vector& theta);

/// Scenario with precomputed steering structure and mixture weights; the
/// cheap per-trial path for Monte Carlo loops.
class ChannelModel {
 public:
  ChannelModel(SystemGeometry geometry, FadingProfile profile);

  const SystemGeometry& geometry() const { return geometry_; }
  const FadingProfile& profile() const { return profile_; }
  const CMatrix& los() const { return los_; }

  ChannelDraw draw(RngStream& rng) const;
  void draw_into(RngStream& rng, ChannelDraw& out) const;

 private:
  SystemGeometry geometry_;
  FadingProfile profile_;
  CMatrix los_;
  Vector los_weight_;      // sqrt(K / (K + 1))
  Vector scatter_weight_;  // sqrt(1 / (K + 1))
  Vector gain_sqrt_;       // sqrt(beta)
};

/// One-shot convenience wrapper around ChannelModel::draw.
ChannelDraw draw_fast_fading(const SystemGeometry& geometry, const FadingProfile& profile,
                             RngStream& rng);

/// Random cell drop: user distances, shadowing and arrival angles, plus the
/// resulting large-scale gains beta = shadow / (r / hole_radius)^pathloss_exp.
struct ScenarioDrop {
  Vector radii;   // meters
  Vector shadow;  // log-normal, linear
  Vector theta;   // radians
  Vector beta;    // linear
};

/// Users uniform in area over the annulus [hole_radius, cell_radius], angles
/// uniform on [-pi/2, pi/2), shadowing log-normal with the given dB standard
/// deviation.
ScenarioDrop drop_users(double cell_radius_m, double hole_radius_m, double pathloss_exponent,
                        double shadow_sigma_db, int users, RngStream& rng);

}  // namespace rmimo
