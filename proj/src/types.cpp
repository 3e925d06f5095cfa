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

#include "rmimo/types.hpp"

#include <numbers>

namespace rmimo {

const char* to_string(Receiver kind) { return kind == Receiver::Mrc ? "mrc" : "zf"; }

const char* to_string(Csi csi) { return csi == Csi::Perfect ? "perfect" : "imperfect"; }

void SystemGeometry::validate() const {
  if (antennas < 1) throw std::invalid_argument("geometry: antennas must be >= 1");
  if (users < 1) throw std::invalid_argument("geometry: users must be >= 1");
  if (!(spacing_ratio > 0.0)) throw std::invalid_argument("geometry: spacing_ratio must be > 0");
  if (theta.size() != users) throw std::invalid_argument("geometry: theta must have one angle per user");
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    if (!(theta[n] >= -half_pi && theta[n] <= half_pi))
      throw std::invalid_argument("geometry: arrival angles must lie in [-pi/2, pi/2]");
  }
}

void FadingProfile::validate(int users) const {
  if (k_factor.size() != users || beta.size() != users)
    throw std::invalid_argument("profile: k_factor and beta must have one entry per user");
  for (int n = 0; n < users; ++n) {
    if (!(k_factor[n] >= 0.0)) throw std::invalid_argument("profile: K-factors must be >= 0");
    if (!(beta[n] > 0.0)) throw std::invalid_argument("profile: beta must be > 0");
  }
}

FadingProfile FadingProfile::uniform(int users, double k, double b) {
  FadingProfile profile;
  profile.k_factor = Vector::Constant(users, k);
  profile.beta = Vector::Constant(users, b);
  return profile;
}

void PilotScheme::validate(int users) const {
  if (tau < users) throw std::invalid_argument("pilot scheme: tau must be >= users");
  if (!(p_u > 0.0)) throw std::invalid_argument("pilot scheme: p_u must be > 0");
}

}  // namespace rmimo
