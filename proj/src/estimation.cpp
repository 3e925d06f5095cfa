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

#include "rmimo/estimation.hpp"

#include <cmath>

namespace rmimo {

Vector eta(const Vector& beta, double pilot_power) {
  if (!(pilot_power > 0.0)) throw std::invalid_argument("eta: pilot power must be > 0");
  return (pilot_power * beta.array()) / (1.0 + pilot_power * beta.array());
}

double error_variance(double beta_i, double k_i, double pilot_power) {
  if (!(beta_i > 0.0) || !(k_i >= 0.0) || !(pilot_power > 0.0))
    throw std::invalid_argument("error_variance: invalid arguments");
  return beta_i / ((1.0 + pilot_power * beta_i) * (k_i + 1.0));
}

void mmse_estimate_into(const ChannelDraw& draw, const FadingProfile& profile,
                        const PilotScheme& scheme, RngStream& rng, EstimateDraw& out) {
  const Eigen::Index rows = draw.channel.rows();
  const Eigen::Index cols = draw.channel.cols();
  profile.validate(static_cast<int>(cols));
  const double p_p = scheme.pilot_power();
  if (!(p_p > 0.0)) throw std::invalid_argument("mmse_estimate: pilot power must be > 0");

  out.eta = eta(profile.beta, p_p);
  out.d_tilde = out.eta;
  out.error_var.resize(cols);
  out.channel_est.resize(rows, cols);

  const double noise_scale = 1.0 / std::sqrt(p_p);
  for (Eigen::Index n = 0; n < cols; ++n) {
    const double k = profile.k_factor[n];
    const double gain_sqrt = std::sqrt(profile.beta[n]);
    const double los_w = std::sqrt(k / (k + 1.0)) * gain_sqrt;
    const double scatter_w = std::sqrt(1.0 / (k + 1.0)) * out.eta[n];
    out.error_var[n] = error_variance(profile.beta[n], k, p_p);
    for (Eigen::Index m = 0; m < rows; ++m) {
      // shrunken noisy observation of the scattered part; steering part known
      const Complex observed = gain_sqrt * draw.scatter(m, n) + noise_scale * rng.cgaussian();
      out.channel_est(m, n) = los_w * draw.los(m, n) + scatter_w * observed;
    }
  }
}

EstimateDraw mmse_estimate(const ChannelDraw& draw, const FadingProfile& profile,
                           const PilotScheme& scheme, RngStream& rng) {
  EstimateDraw out;
  mmse_estimate_into(draw, profile, scheme, rng, out);
  return out;
}

}  // namespace rmimo
