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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rmimo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

enum class Receiver { Mrc, Zf };
enum class Csi { Perfect, Imperfect };

const char* to_string(Receiver kind);
const char* to_string(Csi csi);

/// Uniform linear array serving single-antenna users.
/// All power quantities everywhere in the library are linear; dB conversion
/// happens only at the configuration boundary.
struct SystemGeometry {
  int antennas = 1;            // number of BS antennas
  int users = 1;               // number of single-antenna users
  double spacing_ratio = 0.5;  // antenna spacing over wavelength
  Vector theta;                // per-user arrival angle, radians, in [-pi/2, pi/2]

  void validate() const;  // throws std::invalid_argument
};

/// Per-user Ricean K-factors and large-scale gains, linear scale.
struct FadingProfile {
  Vector k_factor;  // >= 0
  Vector beta;      // > 0

  void validate(int users) const;

  /// Convenience: every user shares the same K and beta.
  static FadingProfile uniform(int users, double k, double b);
};

/// Orthogonal uplink pilots; pilot power is coupled to the data power so
/// power-scaling sweeps stay consistent when p_u changes with the array size.
struct PilotScheme {
  int tau = 1;      // pilot symbols, >= users
  double p_u = 1.0; // per-user data power, linear

  double pilot_power() const { return static_cast<double>(tau) * p_u; }  // p_p
  void validate(int users) const;
};

/// Transmit power cut down as p_u = E_u / M^alpha for a fixed budget E_u.
struct ScalingLaw {
  double alpha = 1.0;  // >= 0
  double e_u = 1.0;    // linear

  double power_at(int antennas) const {
    return e_u / std::pow(static_cast<double>(antennas), alpha);
  }
};

/// Numerical-guard failures. Trials hitting one of these are discarded and
/// counted; standalone evaluations surface them to the caller.
struct NumericalGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularGram : NumericalGuard {
  using NumericalGuard::NumericalGuard;
};
struct SingularSigma : NumericalGuard {
  using NumericalGuard::NumericalGuard;
};
struct SingularSteering : NumericalGuard {
  using NumericalGuard::NumericalGuard;
};
struct TooManyDiscards : NumericalGuard {
  using NumericalGuard::NumericalGuard;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hermitian condition-number guard used by every Gram/covariance inversion.
inline constexpr double kConditionLimit = 1e12;

}  // namespace rmimo
