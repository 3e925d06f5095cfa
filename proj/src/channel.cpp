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

#include "rmimo/channel.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace rmimo {

namespace {
constexpr double kPi = std::numbers::pi;
}

CMatrix steering_matrix(const SystemGeometry& geometry) {
  geometry.validate();
  CMatrix out(geometry.antennas, geometry.users);
  for (int n = 0; n < geometry.users; ++n) {
    const double phase_step = -2.0 * kPi * geometry.spacing_ratio * std::sin(geometry.theta[n]);
    for (int m = 0; m < geometry.antennas; ++m) {
      out(m, n) = std::polar(1.0, static_cast<double>(m) * phase_step);
    }
  }
  return out;
}

double steering_overlap(double theta_a, double theta_b, int antennas) {
  const double delta = std::sin(theta_a) - std::sin(theta_b);
  const double half = 0.5 * kPi * delta;
  const double denom = std::sin(half);
  if (std::abs(denom) < 1e-12) {
    // numerator and denominator vanish together; L'Hopital limit
    return antennas * std::cos(antennas * half) / std::cos(half);
  }
  return std::sin(antennas * half) / denom;
}

CMatrix steering_gram(int antennas, const Vector& theta) {
  const Eigen::Index users = theta.size();
  CMatrix gram(users, users);
  for (Eigen::Index n = 0; n < users; ++n) {
    gram(n, n) = static_cast<double>(antennas);
    for (Eigen::Index i = n + 1; i < users; ++i) {
      const double delta = std::sin(theta[n]) - std::sin(theta[i]);
      const double overlap = steering_overlap(theta[n], theta[i], antennas);
      const Complex value = overlap * std::polar(1.0, 0.5 * (antennas - 1) * kPi * delta);
      gram(n, i) = value;
      gram(i, n) = std::conj(value);
    }
  }
  return gram;
}

ChannelModel::ChannelModel(SystemGeometry geometry, FadingProfile profile)
    : geometry_(std::move(geometry)), profile_(std::move(profile)) {
  geometry_.validate();
  profile_.validate(geometry_.users);
  los_ = steering_matrix(geometry_);
  const Vector& k = profile_.k_factor;
  los_weight_ = (k.array() / (k.array() + 1.0)).sqrt();
  scatter_weight_ = (1.0 / (k.array() + 1.0)).sqrt();
  gain_sqrt_ = profile_.beta.array().sqrt();
}

void ChannelModel::draw_into(RngStream& rng, ChannelDraw& out) const {
  const int rows = geometry_.antennas;
  const int cols = geometry_.users;
  out.los = los_;
  out.scatter.resize(rows, cols);
  out.fading.resize(rows, cols);
  out.channel.resize(rows, cols);
  for (int n = 0; n < cols; ++n) {
    for (int m = 0; m < rows; ++m) {
      out.scatter(m, n) = rng.cgaussian();
    }
  }
  for (int n = 0; n < cols; ++n) {
    out.fading.col(n) = los_weight_[n] * los_.col(n) + scatter_weight_[n] * out.scatter.col(n);
    out.channel.col(n) = gain_sqrt_[n] * out.fading.col(n);
  }
}

ChannelDraw ChannelModel::draw(RngStream& rng) const {
  ChannelDraw out;
  draw_into(rng, out);
  return out;
}

ChannelDraw draw_fast_fading(const SystemGeometry& geometry, const FadingProfile& profile,
                             RngStream& rng) {
  return ChannelModel(geometry, profile).draw(rng);
}

ScenarioDrop drop_users(double cell_radius_m, double hole_radius_m, double pathloss_exponent,
                        double shadow_sigma_db, int users, RngStream& rng) {
  if (!(hole_radius_m > 0.0) || !(hole_radius_m < cell_radius_m))
    throw std::invalid_argument("drop_users: need 0 < hole_radius < cell_radius");
  if (users < 1) throw std::invalid_argument("drop_users: users must be >= 1");

  ScenarioDrop drop;
  drop.radii.resize(users);
  drop.shadow.resize(users);
  drop.theta.resize(users);
  drop.beta.resize(users);

  const double r2_lo = hole_radius_m * hole_radius_m;
  const double r2_hi = cell_radius_m * cell_radius_m;
  for (int n = 0; n < users; ++n) {
    // uniform in area over the annulus
    drop.radii[n] = std::sqrt(r2_lo + rng.uniform() * (r2_hi - r2_lo));
    drop.theta[n] = (rng.uniform() - 0.5) * kPi;
    // shadowing with the given dB standard deviation
    drop.shadow[n] = std::pow(10.0, shadow_sigma_db * rng.gaussian() / 10.0);
    drop.beta[n] =
        drop.shadow[n] / std::pow(drop.radii[n] / hole_radius_m, pathloss_exponent);
  }
  return drop;
}

}  // namespace rmimo
