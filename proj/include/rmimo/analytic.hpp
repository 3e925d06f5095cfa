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

#include <span>

#include "rmimo/types.hpp"

namespace rmimo {

// Closed-form rate approximations, deterministic equivalents, power-scaling
// limits and column-moment formulas. Everything here assumes half-wavelength
// antenna spacing; all functions are pure and allocation-light.

/// Exact first and second moments of channel-column inner products.
///   norm2(n)      E ||col_n||^2
///   norm4(n)      E |col_n^H col_n|^2
///   cross2(n, i)  E |col_n^H col_i|^2 for i != n; diagonal holds norm4
struct MomentSet {
  Vector norm2;
  Vector norm4;
  Matrix cross2;
};

/// Moments of the columns of the unit-gain fading matrix.
MomentSet fading_moments(int antennas, const FadingProfile& profile, const Vector& theta);

/// Moments of the columns of the MMSE channel estimate (gains included).
MomentSet estimate_moments(int antennas, const FadingProfile& profile, const Vector& theta,
                           double pilot_power);

/// Finite-antenna per-user rate approximations, bits/s/Hz, one per
/// receiver x CSI combination. The imperfect-CSI forms couple the pilot
/// power as p_p = tau * p_u.
Vector approx_mrc_perfect(int antennas, const FadingProfile& profile, const Vector& theta,
                          double p_u);
Vector approx_zf_perfect(int antennas, const FadingProfile& profile, const Vector& theta,
                         double p_u);
Vector approx_mrc_imperfect(int antennas, const FadingProfile& profile, const Vector& theta,
                            double p_u, int tau);
Vector approx_zf_imperfect(int antennas, const FadingProfile& profile, const Vector& theta,
                           double p_u, int tau);

/// Dispatch over the four closed forms above.
Vector approx_rate(int antennas, const FadingProfile& profile, const Vector& theta, double p_u,
                   int tau, Receiver kind, Csi csi);

/// Large-array deterministic equivalent of the per-user rate under the power
/// law p_u = E_u / M^alpha. The same function serves MRC and ZF: their
/// equivalents coincide, and callers may assert bit-equality.
double deterministic_equivalent(const ScalingLaw& law, int antennas, double beta_n, double k_n,
                                int tau, Csi csi, Receiver kind);

/// Per-user rate limits as the Ricean K-factor grows without bound. The same
/// value is reached from perfect and imperfect CSI.
Vector los_limit_rate(int antennas, const Vector& beta, const Vector& theta, double p_u,
                      Receiver kind);

/// Rate limit under the steepest admissible power scaling: alpha = 1 for
/// perfect CSI or nonzero K, alpha = 1/2 for imperfect CSI in Rayleigh fading.
double power_scaling_limit(double k_n, double e_u, double beta_n, int tau, Csi csi);

/// Accuracy diagnostic for the mean-ratio rate approximation: the width of the
/// bracket around E{log2(1 + X/Y)}, estimated from paired samples of the
/// numerator X and denominator Y via their relative variances. Shrinks as X
/// and Y concentrate, i.e. as the antenna count grows.
double approximation_offset(std::span<const double> samples_x, std::span<const double> samples_y);

}  // namespace rmimo
