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

#include <cmath>
#include <iomanip>
#include <sstream>

#include "rmimo/analytic.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/estimation.hpp"
#include "rmimo/experiments.hpp"
#include "rmimo/numeric.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

namespace {

Vector spread_angles(int users) {
  Vector theta(users);
  if (users == 1) {
    theta[0] = 0.0;
    return theta;
  }
  for (int n = 0; n < users; ++n) {
    theta[n] = -1.2 + 2.4 * n / (users - 1.0);
  }
  return theta;
}

void print_line(std::ostream& out, const std::string& label, double closed, const MeanVar& mc) {
  out << "  " << std::left << std::setw(26) << label << " closed " << std::setw(14) << closed
      << " mc " << std::setw(14) << mc.mean << " +/- " << mc.std_error() << '\n';
}

}  // namespace

std::string moments_report(int antennas, int users, double k_db, double pilot_power,
                           std::uint64_t draws, std::uint64_t seed) {
  if (users < 2) throw std::invalid_argument("moments_report: needs at least 2 users");
  if (draws < 100) throw std::invalid_argument("moments_report: needs at least 100 draws");

  SystemGeometry geometry;
  geometry.antennas = antennas;
  geometry.users = users;
  geometry.theta = spread_angles(users);
  const double k = db_to_linear(k_db);
  const FadingProfile profile = FadingProfile::uniform(users, k, 1.0);
  PilotScheme scheme;
  scheme.tau = users;
  scheme.p_u = pilot_power / users;

  const MomentSet fading_closed = fading_moments(antennas, profile, geometry.theta);
  const MomentSet est_closed = estimate_moments(antennas, profile, geometry.theta, pilot_power);

  const ChannelModel model(geometry, profile);
  RngStream rng(seed);
  ChannelDraw draw;
  EstimateDraw est;
  std::vector<double> f_n2, f_n4, f_cross, e_n2, e_n4, e_cross;
  f_n2.reserve(draws);
  f_n4.reserve(draws);
  f_cross.reserve(draws);
  e_n2.reserve(draws);
  e_n4.reserve(draws);
  e_cross.reserve(draws);
  for (std::uint64_t t = 0; t < draws; ++t) {
    model.draw_into(rng, draw);
    mmse_estimate_into(draw, profile, scheme, rng, est);
    const double fn = draw.fading.col(0).squaredNorm();
    f_n2.push_back(fn);
    f_n4.push_back(fn * fn);
    f_cross.push_back(std::norm(draw.fading.col(0).dot(draw.fading.col(1))));
    const double en = est.channel_est.col(0).squaredNorm();
    e_n2.push_back(en);
    e_n4.push_back(en * en);
    e_cross.push_back(std::norm(est.channel_est.col(0).dot(est.channel_est.col(1))));
  }

  std::ostringstream out;
  out << "column moments, M=" << antennas << " N=" << users << " K=" << k_db
      << " dB, pilot power " << pilot_power << ", " << draws << " draws\n";
  out << "fading matrix (user 0 vs user 1):\n";
  print_line(out, "E ||h||^2", fading_closed.norm2[0], mean_variance(f_n2));
  print_line(out, "E |h^H h|^2", fading_closed.norm4[0], mean_variance(f_n4));
  print_line(out, "E |h_0^H h_1|^2", fading_closed.cross2(0, 1), mean_variance(f_cross));
  out << "channel estimate (user 0 vs user 1):\n";
  print_line(out, "E ||g~||^2", est_closed.norm2[0], mean_variance(e_n2));
  print_line(out, "E |g~^H g~|^2", est_closed.norm4[0], mean_variance(e_n4));
  print_line(out, "E |g~_0^H g~_1|^2", est_closed.cross2(0, 1), mean_variance(e_cross));
  return out.str();
}

std::string plan_report(double alpha, double e_u_db, double beta, double k_db, int tau, Csi csi,
                        const std::vector<int>& antenna_grid) {
  if (antenna_grid.empty()) throw std::invalid_argument("plan_report: empty antenna grid");
  const double e_u = db_to_linear(e_u_db);
  const double k = db_to_linear(k_db);
  const ScalingLaw law{alpha, e_u};

  std::ostringstream out;
  out << "power-scaling plan: p_u = E_u / M^alpha with alpha=" << alpha << ", E_u=" << e_u_db
      << " dB, beta=" << beta << ", K=" << k_db << " dB, tau=" << tau << ", "
      << to_string(csi) << " CSI\n";
  for (int antennas : antenna_grid) {
    const double rate =
        deterministic_equivalent(law, antennas, beta, k, tau, csi, Receiver::Mrc);
    out << "  M=" << std::setw(6) << antennas << "  p_u=" << std::setw(12)
        << e_u_db - 10.0 * alpha * std::log10(static_cast<double>(antennas))
        << " dB  det-equiv rate=" << rate << " bits/s/Hz\n";
  }
  out << "  limit at the steepest admissible scaling: "
      << power_scaling_limit(k, e_u, beta, tau, csi) << " bits/s/Hz\n";
  return out.str();
}

}  // namespace rmimo
