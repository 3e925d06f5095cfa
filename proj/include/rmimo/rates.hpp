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

#include <cstdint>

#include "rmimo/estimation.hpp"
#include "rmimo/types.hpp"

namespace rmimo {

/// Monte Carlo plan. Trials fan out over `workers` threads; every trial owns
/// the substream keyed by (master_seed, scenario_id, trial_index) and the
/// reduction is a fixed-order pairwise sum, so results are bitwise identical
/// for any worker count.
struct McPlan {
  std::uint64_t trials = 10000;  // >= 100
  std::uint64_t master_seed = 1;
  std::uint64_t scenario_id = 0;
  int workers = 1;
  int coherence_symbols = 196;  // symbols per coherence interval
};

/// Monte Carlo mean rates in bits/s/Hz.
/// sum_rate carries the pilot-overhead prefactor (tau consumed out of the
/// coherence interval) when CSI is imperfect; per_user never does.
struct RateEstimate {
  Vector per_user;
  Vector std_error;
  double sum_rate = 0.0;
  double sum_std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t discarded = 0;
};

/// Per-realization SINR with perfect CSI. MRC works directly on the channel
/// columns; ZF goes through the Gram inverse diagonal and throws SingularGram
/// when the Gram condition number exceeds the guard.
double sinr_perfect(const CMatrix& channel, int user, double p_u, Receiver kind);

/// Per-realization SINR with MMSE-estimated CSI; the estimation-error power
/// enters as worst-case uncorrelated noise through the closed-form variance.
double sinr_imperfect(const EstimateDraw& est, const FadingProfile& profile,
                      const PilotScheme& scheme, int user, Receiver kind);

/// sum over users of p_u*beta_i / ((1 + p_p*beta_i)*(K_i + 1)), plus one;
/// the effective noise inflation seen by every user under imperfect CSI.
double noise_inflation(const FadingProfile& profile, const PilotScheme& scheme);

/// Diagonal of the inverse Gram matrix of `mat`, via Cholesky after enforcing
/// Hermitian symmetry. Throws SingularGram past the condition guard.
Vector gram_inverse_diagonal(const CMatrix& mat);

/// Monte Carlo achievable-rate estimate: one fading draw (plus one pilot-noise
/// draw when CSI is imperfect) per trial, scenario held fixed across trials.
/// Throws TooManyDiscards if more than 1e-3 of the trials hit a guard.
RateEstimate estimate_rate(const SystemGeometry& geometry, const FadingProfile& profile,
                           const PilotScheme& scheme, Receiver kind, Csi csi, const McPlan& plan);

/// Sum rate with the pilot-overhead prefactor for imperfect CSI.
double sum_rate(const Vector& per_user, Csi csi, int coherence_symbols, int tau);

}  // namespace rmimo
