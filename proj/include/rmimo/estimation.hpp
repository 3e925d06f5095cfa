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

#include "rmimo/channel.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/types.hpp"

namespace rmimo {

/// One pilot-based MMSE estimate of the channel, with the steering component
/// assumed known at the receiver.
///   channel_est   estimated channel matrix
///   d_tilde       per-user MMSE shrinkage applied to the noisy observation
///   eta           p_p*beta / (1 + p_p*beta); equals d_tilde
///   error_var     per-entry variance of the estimation error, per user
struct EstimateDraw {
  CMatrix channel_est;
  Vector d_tilde;
  Vector eta;
  Vector error_var;
};

/// Per-user MMSE shrinkage factors eta_n = p_p*beta_n / (1 + p_p*beta_n).
Vector eta(const Vector& beta, double pilot_power);

/// Per-entry estimation-error variance beta / ((1 + p_p*beta) * (K + 1)).
double error_variance(double beta_i, double k_i, double pilot_power);

/// Draws fresh pilot noise and forms the MMSE estimate of the scattered
/// component directly in its shrunken-observation form; the orthogonal pilot
/// matrix itself is never materialized because the whitened noise is again
/// i.i.d. standard complex Gaussian.
EstimateDraw mmse_estimate(const ChannelDraw& draw, const FadingProfile& profile,
                           const PilotScheme& scheme, RngStream& rng);

/// Allocation-free variant for Monte Carlo loops.
void mmse_estimate_into(const ChannelDraw& draw, const FadingProfile& profile,
                        const PilotScheme& scheme, RngStream& rng, EstimateDraw& out);

}  // namespace rmimo
