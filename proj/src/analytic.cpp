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

#include "rmimo/analytic.hpp"

#include <cmath>
#include <vector>

#include "rmimo/channel.hpp"
#include "rmimo/estimation.hpp"
#include "rmimo/numeric.hpp"

namespace rmimo {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;

double rate_bits(double sinr) { return std::log1p(sinr) * kInvLn2; }

void check_inputs(int antennas, const FadingProfile& profile, const Vector& theta) {
  if (antennas < 1) throw std::invalid_argument("analytic: antennas must be >= 1");
  profile.validate(static_cast<int>(theta.size()));
}

Matrix overlap_squared(int antennas, const Vector& theta) {
  const Eigen::Index users = theta.size();
  Matrix out = Matrix::Zero(users, users);
  for (Eigen::Index n = 0; n < users; ++n) {
    for (Eigen::Index i = n + 1; i < users; ++i) {
      const double phi = steering_overlap(theta[n], theta[i], antennas);
      out(n, i) = phi * phi;
      out(i, n) = out(n, i);
    }
  }
  return out;
}

// (Omega (Omega + I)^-1)^(1/2) weights, one per user
Vector los_mixture_sqrt(const Vector& k_factor) {
  return (k_factor.array() / (k_factor.array() + 1.0)).sqrt();
}

// Covariance surrogate for the steering-plus-scatter Gram: a diagonal term
// per user plus the scaled steering Gram, mixed by the K-factors.
CMatrix mixture_covariance(int antennas, const FadingProfile& profile, const Vector& theta,
                           const Vector& diagonal) {
  const Eigen::Index users = theta.size();
  const Vector mix = los_mixture_sqrt(profile.k_factor);
  CMatrix cov = steering_gram(antennas, theta);
  for (Eigen::Index n = 0; n < users; ++n) {
    for (Eigen::Index i = 0; i < users; ++i) {
      cov(n, i) *= mix[n] * mix[i] / antennas;
    }
    cov(n, n) += diagonal[n];
  }
  return 0.5 * (cov + cov.adjoint());
}

// Inverse diagonal of a Hermitian positive-definite matrix with the shared
// condition guard; `guard` selects which failure to raise.
enum class GuardKind { Sigma, Steering };

Vector hpd_inverse_diagonal(const CMatrix& mat, GuardKind guard) {
  const Eigen::Index users = mat.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(mat, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(users - 1);
  if (!(lo > 0.0) || hi > lo * kConditionLimit) {
    if (guard == GuardKind::Sigma)
      throw SingularSigma("covariance surrogate condition number exceeds guard");
    throw SingularSteering("steering gram condition number exceeds guard");
  }
  Eigen::LLT<CMatrix> llt(mat);
  if (llt.info() != Eigen::Success) {
    if (guard == GuardKind::Sigma)
      throw SingularSigma("covariance surrogate Cholesky failed");
    throw SingularSteering("steering gram Cholesky failed");
  }
  const CMatrix inverse = llt.solve(CMatrix::Identity(users, users));
  Vector out(users);
  for (Eigen::Index n = 0; n < users; ++n) out[n] = inverse(n, n).real();
  return out;
}

}  // namespace

MomentSet fading_moments(int antennas, const FadingProfile& profile, const Vector& theta) {
  check_inputs(antennas, profile, theta);
  const Eigen::Index users = theta.size();
  const double m = antennas;
  const Matrix phi2 = overlap_squared(antennas, theta);

  MomentSet out;
  out.norm2 = Vector::Constant(users, m);
  out.norm4.resize(users);
  out.cross2.resize(users, users);
  for (Eigen::Index n = 0; n < users; ++n) {
    const double kn = profile.k_factor[n];
    const double kn1 = kn + 1.0;
    out.norm4[n] = (2.0 * m * kn + m) / (kn1 * kn1) + m * m;
    out.cross2(n, n) = out.norm4[n];
    for (Eigen::Index i = 0; i < users; ++i) {
      if (i == n) continue;
      const double ki = profile.k_factor[i];
      out.cross2(n, i) =
          (kn * ki * phi2(n, i) + m * (kn + ki) + m) / (kn1 * (ki + 1.0));
    }
  }
  return out;
}

MomentSet estimate_moments(int antennas, const FadingProfile& profile, const Vector& theta,
                           double pilot_power) {
  check_inputs(antennas, profile, theta);
  if (!(pilot_power > 0.0)) throw std::invalid_argument("estimate_moments: pilot power must be > 0");
  const Eigen::Index users = theta.size();
  const double m = antennas;
  const Matrix phi2 = overlap_squared(antennas, theta);
  const Vector shrink = eta(profile.beta, pilot_power);

  MomentSet out;
  out.norm2.resize(users);
  out.norm4.resize(users);
  out.cross2.resize(users, users);
  for (Eigen::Index n = 0; n < users; ++n) {
    const double kn = profile.k_factor[n];
    const double kn1 = kn + 1.0;
    const double bn = profile.beta[n];
    const double en = shrink[n];
    out.norm2[n] = bn * m * (kn + en) / kn1;
    out.norm4[n] = bn * bn / (kn1 * kn1) *
                   (m * m * kn * kn + (2.0 * m * kn + 2.0 * m * m * kn) * en +
                    (m * m + m) * en * en);
    out.cross2(n, n) = out.norm4[n];
    for (Eigen::Index i = 0; i < users; ++i) {
      if (i == n) continue;
      const double ki = profile.k_factor[i];
      const double bi = profile.beta[i];
      const double ei = shrink[i];
      out.cross2(n, i) = bn * bi / (kn1 * (ki + 1.0)) *
                         (kn * ki * phi2(n, i) + m * ki * en + m * kn * ei + m * en * ei);
    }
  }
  return out;
}

Vector approx_mrc_perfect(int antennas, const FadingProfile& profile, const Vector& theta,
                          double p_u) {
  check_inputs(antennas, profile, theta);
  if (!(p_u > 0.0)) throw std::invalid_argument("approx_mrc_perfect: p_u must be > 0");
  const Eigen::Index users = theta.size();
  const double m = antennas;
  const Matrix phi2 = overlap_squared(antennas, theta);

  Vector out(users);
  for (Eigen::Index n = 0; n < users; ++n) {
    const double kn = profile.k_factor[n];
    const double kn1 = kn + 1.0;
    const double num = p_u * profile.beta[n] * (2.0 * m * kn + m + m * m * kn1 * kn1);
    double cross = 0.0;
    for (Eigen::Index i = 0; i < users; ++i) {
      if (i == n) continue;
      const double ki = profile.k_factor[i];
      cross += profile.beta[i] * (kn * ki * phi2(n, i) + m * (kn + ki) + m) / (ki + 1.0);
    }
    const double den = p_u * kn1 * cross + m * kn1 * kn1;
    out[n] = rate_bits(num / den);
  }
  return out;
}

Vector approx_zf_perfect(int antennas, const FadingProfile& profile, const Vector& theta,
                         double p_u) {
  check_inputs(antennas, profile, theta);
  if (!(p_u > 0.0)) throw std::invalid_argument("approx_zf_perfect: p_u must be > 0");
  const Eigen::Index users = theta.size();
  if (antennas <= users) throw std::invalid_argument("approx_zf_perfect: needs antennas > users");

  const Vector diagonal = 1.0 / (profile.k_factor.array() + 1.0);
  const CMatrix cov = mixture_covariance(antennas, profile, theta, diagonal);
  const Vector inv_diag = hpd_inverse_diagonal(cov, GuardKind::Sigma);

  Vector out(users);
  for (Eigen::Index n = 0; n < users; ++n) {
    out[n] = rate_bits(p_u * profile.beta[n] * (antennas - users) / inv_diag[n]);
  }
  return out;
}

Vector approx_mrc_imperfect(int antennas, const FadingProfile& profile, const Vector& theta,
                            double p_u, int tau) {
  check_inputs(antennas, profile, theta);
  const double p_p = tau * p_u;
  if (!(p_p > 0.0)) throw std::invalid_argument("approx_mrc_imperfect: pilot power must be > 0");
  const Eigen::Index users = theta.size();
  const double m = antennas;
  const Matrix phi2 = overlap_squared(antennas, theta);
  const Vector shrink = eta(profile.beta, p_p);

  Vector out(users);
  for (Eigen::Index n = 0; n < users; ++n) {
    const double kn = profile.k_factor[n];
    const double kn1 = kn + 1.0;
    const double bn = profile.beta[n];
    const double en = shrink[n];
    const double num =
        p_u * bn * (m * m * kn * kn + (2.0 * m * kn + 2.0 * m * m * kn) * en + (m + m * m) * en * en);
    double cross = 0.0;
    for (Eigen::Index i = 0; i < users; ++i) {
      if (i == n) continue;
      const double ki = profile.k_factor[i];
      cross += profile.beta[i] * (kn * ki * phi2(n, i) + m * en * (ki + 1.0) + m * kn) / (ki + 1.0);
    }
    const double den = p_u * kn1 * cross + m * p_u * bn * (kn + en) / (1.0 + bn * p_p) +
                       m * kn1 * (kn + en);
    out[n] = rate_bits(num / den);
  }
  return out;
}

Vector approx_zf_imperfect(int antennas, const FadingProfile& profile, const Vector& theta,
                           double p_u, int tau) {
  check_inputs(antennas, profile, theta);
  const double p_p = tau * p_u;
  if (!(p_p > 0.0)) throw std::invalid_argument("approx_zf_imperfect: pilot power must be > 0");
  const Eigen::Index users = theta.size();
  if (antennas <= users) throw std::invalid_argument("approx_zf_imperfect: needs antennas > users");

  const Vector shrink = eta(profile.beta, p_p);
  const Vector diagonal = shrink.array() / (profile.k_factor.array() + 1.0);
  const CMatrix cov = mixture_covariance(antennas, profile, theta, diagonal);
  const Vector inv_diag = hpd_inverse_diagonal(cov, GuardKind::Sigma);

  double inflation = 1.0;
  for (Eigen::Index i = 0; i < users; ++i) {
    inflation += p_u * error_variance(profile.beta[i], profile.k_factor[i], p_p);
  }

  Vector out(users);
  for (Eigen::Index n = 0; n < users; ++n) {
    out[n] = rate_bits(p_u * profile.beta[n] * (antennas - users) / (inflation * inv_diag[n]));
  }
  return out;
}

Vector approx_rate(int antennas, const FadingProfile& profile, const Vector& theta, double p_u,
                   int tau, Receiver kind, Csi csi) {
  if (csi == Csi::Perfect) {
    return kind == Receiver::Mrc ? approx_mrc_perfect(antennas, profile, theta, p_u)
                                 : approx_zf_perfect(antennas, profile, theta, p_u);
  }
  return kind == Receiver::Mrc ? approx_mrc_imperfect(antennas, profile, theta, p_u, tau)
                               : approx_zf_imperfect(antennas, profile, theta, p_u, tau);
}

double deterministic_equivalent(const ScalingLaw& law, int antennas, double beta_n, double k_n,
                                int tau, Csi csi, Receiver kind) {
  (void)kind;  // MRC and ZF equivalents coincide
  if (!(law.alpha >= 0.0)) throw std::invalid_argument("deterministic_equivalent: alpha must be >= 0");
  if (!(law.e_u > 0.0)) throw std::invalid_argument("deterministic_equivalent: e_u must be > 0");
  const double m = antennas;
  if (csi == Csi::Perfect) {
    return rate_bits(law.e_u * beta_n / std::pow(m, law.alpha - 1.0));
  }
  const double k1 = k_n + 1.0;
  const double los_term = law.e_u * beta_n * k_n / (std::pow(m, law.alpha - 1.0) * k1);
  const double pilot_term =
      tau * law.e_u * law.e_u * beta_n * beta_n / (std::pow(m, 2.0 * law.alpha - 1.0) * k1);
  return rate_bits(los_term + pilot_term);
}

Vector los_limit_rate(int antennas, const Vector& beta, const Vector& theta, double p_u,
                      Receiver kind) {
  const Eigen::Index users = theta.size();
  if (beta.size() != users) throw std::invalid_argument("los_limit_rate: beta/theta size mismatch");
  if (!(p_u > 0.0)) throw std::invalid_argument("los_limit_rate: p_u must be > 0");
  const double m = antennas;
  Vector out(users);
  if (kind == Receiver::Mrc) {
    const Matrix phi2 = overlap_squared(antennas, theta);
    for (Eigen::Index n = 0; n < users; ++n) {
      double cross = 0.0;
      for (Eigen::Index i = 0; i < users; ++i) {
        if (i != n) cross += beta[i] * phi2(n, i);
      }
      out[n] = rate_bits(p_u * beta[n] * m * m / (p_u * cross + m));
    }
    return out;
  }
  if (antennas <= users) throw std::invalid_argument("los_limit_rate: ZF needs antennas > users");
  const CMatrix normalized = steering_gram(antennas, theta) / m;
  const Vector inv_diag = hpd_inverse_diagonal(normalized, GuardKind::Steering);
  for (Eigen::Index n = 0; n < users; ++n) {
    out[n] = rate_bits(p_u * beta[n] * (antennas - users) / inv_diag[n]);
  }
  return out;
}

double power_scaling_limit(double k_n, double e_u, double beta_n, int tau, Csi csi) {
  if (!(e_u > 0.0)) throw std::invalid_argument("power_scaling_limit: e_u must be > 0");
  if (csi == Csi::Perfect) {
    return rate_bits(e_u * beta_n);
  }
  if (k_n == 0.0) {
    return rate_bits(tau * e_u * e_u * beta_n * beta_n);
  }
  return rate_bits(k_n * e_u * beta_n / (k_n + 1.0));
}

double approximation_offset(std::span<const double> samples_x, std::span<const double> samples_y) {
  if (samples_x.size() != samples_y.size() || samples_x.empty())
    throw std::invalid_argument("approximation_offset: need paired, nonempty samples");
  std::vector<double> total(samples_x.size());
  for (std::size_t i = 0; i < samples_x.size(); ++i) total[i] = samples_x[i] + samples_y[i];
  const MeanVar mv_total = mean_variance(total);
  const MeanVar mv_y = mean_variance(samples_y);
  if (!(mv_total.mean > 0.0) || !(mv_y.mean > 0.0))
    throw std::invalid_argument("approximation_offset: sample means must be positive");
  const double rel_total = mv_total.variance / (mv_total.mean * mv_total.mean);
  const double rel_y = mv_y.variance / (mv_y.mean * mv_y.mean);
  return std::log2((1.0 + rel_total) * (1.0 + rel_y));
}

}  // namespace rmimo
