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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "rmimo/analytic.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/estimation.hpp"
#include "rmimo/experiments.hpp"
#include "rmimo/numeric.hpp"
#include "rmimo/rates.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;

double rate_bits(double sinr) { return std::log1p(sinr) * kInvLn2; }

// fixed two-user bench used by the statistical checks
const double kThetaA = 0.4;
const double kThetaB = -0.1;

SystemGeometry bench_geometry(int antennas) {
  SystemGeometry g;
  g.antennas = antennas;
  g.users = 2;
  g.theta = Vector(2);
  g.theta << kThetaA, kThetaB;
  return g;
}

struct Accumulator {
  std::vector<double> values;
  void reserve(std::size_t n) { values.reserve(n); }
  void add(double v) { values.push_back(v); }
  MeanVar stats() const { return mean_variance(values); }
};

double z_score(const MeanVar& mv, double target) {
  const double se = mv.std_error();
  if (se == 0.0) return mv.mean == target ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(mv.mean - target) / se;
}

// shift applied to a closed-form cross moment when the steering overlap is
// biased by `delta` (the fault-injection hook)
double cross_perturbation(double k_n, double k_i, double scale, double phi, double delta) {
  const double biased = (phi + delta) * (phi + delta) - phi * phi;
  return scale * k_n * k_i * biased / ((k_n + 1.0) * (k_i + 1.0));
}

struct WorstZ {
  double value = 0.0;
  std::string quantity;
  void update(double z, const std::string& name) {
    if (z > value) {
      value = z;
      quantity = name;
    }
  }
};

CheckResult check_fading_moments(int antennas, double k, std::uint64_t draws, std::uint64_t seed,
                                 double phi_perturbation) {
  const SystemGeometry geometry = bench_geometry(antennas);
  FadingProfile profile;
  profile.k_factor = Vector::Constant(2, k);
  profile.beta = Vector(2);
  profile.beta << 1.0, 0.6;

  MomentSet closed = fading_moments(antennas, profile, geometry.theta);
  if (phi_perturbation != 0.0) {
    const double phi = steering_overlap(kThetaA, kThetaB, antennas);
    const double shift = cross_perturbation(k, k, 1.0, phi, phi_perturbation);
    closed.cross2(0, 1) += shift;
    closed.cross2(1, 0) += shift;
  }

  const ChannelModel model(geometry, profile);
  RngStream rng(seed);
  ChannelDraw draw;
  Accumulator n2[2], n4[2], cross;
  for (std::uint64_t t = 0; t < draws; ++t) {
    model.draw_into(rng, draw);
    for (int n = 0; n < 2; ++n) {
      const double norm2 = draw.fading.col(n).squaredNorm();
      n2[n].add(norm2);
      n4[n].add(norm2 * norm2);
    }
    cross.add(std::norm(draw.fading.col(0).dot(draw.fading.col(1))));
  }

  WorstZ worst;
  for (int n = 0; n < 2; ++n) {
    worst.update(z_score(n2[n].stats(), closed.norm2[n]), "norm2 user " + std::to_string(n));
    worst.update(z_score(n4[n].stats(), closed.norm4[n]), "norm4 user " + std::to_string(n));
  }
  worst.update(z_score(cross.stats(), closed.cross2(0, 1)), "cross moment");

  CheckResult result;
  result.name = "fading column moments (M=" + std::to_string(antennas) +
                ", K=" + std::to_string(static_cast<int>(k)) + ")";
  result.measured = worst.value;
  result.threshold = 4.0;
  result.pass = worst.value <= 4.0;
  result.detail = "worst deviation " + worst.quantity;
  return result;
}

CheckResult check_estimate_moments(int antennas, double k, double p_p, std::uint64_t draws,
                                   std::uint64_t seed, double phi_perturbation) {
  const SystemGeometry geometry = bench_geometry(antennas);
  FadingProfile profile;
  profile.k_factor = Vector::Constant(2, k);
  profile.beta = Vector(2);
  profile.beta << 1.0, 0.6;
  PilotScheme scheme;
  scheme.tau = 2;
  scheme.p_u = p_p / 2.0;

  MomentSet closed = estimate_moments(antennas, profile, geometry.theta, p_p);
  if (phi_perturbation != 0.0) {
    const double phi = steering_overlap(kThetaA, kThetaB, antennas);
    const double shift = cross_perturbation(
        k, k, profile.beta[0] * profile.beta[1], phi, phi_perturbation);
    closed.cross2(0, 1) += shift;
    closed.cross2(1, 0) += shift;
  }

  const ChannelModel model(geometry, profile);
  RngStream rng(seed);
  ChannelDraw draw;
  EstimateDraw est;
  Accumulator n2[2], n4[2], cross;
  for (std::uint64_t t = 0; t < draws; ++t) {
    model.draw_into(rng, draw);
    mmse_estimate_into(draw, profile, scheme, rng, est);
    for (int n = 0; n < 2; ++n) {
      const double norm2 = est.channel_est.col(n).squaredNorm();
      n2[n].add(norm2);
      n4[n].add(norm2 * norm2);
    }
    cross.add(std::norm(est.channel_est.col(0).dot(est.channel_est.col(1))));
  }

  WorstZ worst;
  for (int n = 0; n < 2; ++n) {
    worst.update(z_score(n2[n].stats(), closed.norm2[n]), "norm2 user " + std::to_string(n));
    worst.update(z_score(n4[n].stats(), closed.norm4[n]), "norm4 user " + std::to_string(n));
  }
  worst.update(z_score(cross.stats(), closed.cross2(0, 1)), "cross moment");

  std::ostringstream name;
  name << "estimate column moments (M=" << antennas << ", K=" << static_cast<int>(k)
       << ", p_p=" << p_p << ")";
  CheckResult result;
  result.name = name.str();
  result.measured = worst.value;
  result.threshold = 4.0;
  result.pass = worst.value <= 4.0;
  result.detail = "worst deviation " + worst.quantity;
  return result;
}

CheckResult check_error_variance(double k, std::uint64_t trials, std::uint64_t seed) {
  const int antennas = 8;
  const SystemGeometry geometry = bench_geometry(antennas);
  FadingProfile profile;
  profile.k_factor = Vector::Constant(2, k);
  profile.beta = Vector(2);
  profile.beta << 0.1, 1.0;
  PilotScheme scheme;
  scheme.tau = 2;
  scheme.p_u = 5.0;  // p_p = 10

  const ChannelModel model(geometry, profile);
  RngStream rng(seed);
  ChannelDraw draw;
  EstimateDraw est;
  Vector acc = Vector::Zero(2);
  Complex mean_acc[2] = {Complex(0, 0), Complex(0, 0)};
  const double count = static_cast<double>(trials) * antennas;
  for (std::uint64_t t = 0; t < trials; ++t) {
    model.draw_into(rng, draw);
    mmse_estimate_into(draw, profile, scheme, rng, est);
    for (int n = 0; n < 2; ++n) {
      for (int m = 0; m < antennas; ++m) {
        const Complex err = est.channel_est(m, n) - draw.channel(m, n);
        acc[n] += std::norm(err);
        mean_acc[n] += err;
      }
    }
  }

  double worst = 0.0;
  for (int n = 0; n < 2; ++n) {
    const Complex mean = mean_acc[n] / count;
    const double var = acc[n] / count - std::norm(mean);
    const double target = error_variance(profile.beta[n], k, scheme.pilot_power());
    worst = std::max(worst, std::abs(var - target) / target);
  }
  // 3% at the nominal budget; smaller budgets widen to a 4-sigma bound on the
  // variance estimator itself
  const double threshold = std::max(0.03, 4.0 * std::sqrt(2.0 / count));

  std::ostringstream name;
  name << "estimation error variance (K=" << k << ")";
  CheckResult result;
  result.name = name.str();
  result.measured = worst;
  result.threshold = threshold;
  result.pass = worst <= threshold;
  result.detail = "max relative deviation over users";
  return result;
}

CheckResult check_orthogonality(std::uint64_t trials, std::uint64_t seed) {
  const int antennas = 8;
  const SystemGeometry geometry = bench_geometry(antennas);
  FadingProfile profile;
  profile.k_factor = Vector::Constant(2, 1.0);
  profile.beta = Vector(2);
  profile.beta << 1.0, 0.6;
  PilotScheme scheme;
  scheme.tau = 2;
  scheme.p_u = 5.0;

  const ChannelModel model(geometry, profile);
  RngStream rng(seed);
  ChannelDraw draw;
  EstimateDraw est;
  Accumulator re, im;
  re.reserve(trials * antennas);
  im.reserve(trials * antennas);
  for (std::uint64_t t = 0; t < trials; ++t) {
    model.draw_into(rng, draw);
    mmse_estimate_into(draw, profile, scheme, rng, est);
    for (int m = 0; m < antennas; ++m) {
      const Complex err = est.channel_est(m, 0) - draw.channel(m, 0);
      const Complex prod = est.channel_est(m, 0) * std::conj(err);
      re.add(prod.real());
      im.add(prod.imag());
    }
  }
  const double z = std::max(z_score(re.stats(), 0.0), z_score(im.stats(), 0.0));

  CheckResult result;
  result.name = "estimate/error orthogonality";
  result.measured = z;
  result.threshold = 4.0;
  result.pass = z <= 4.0;
  result.detail = "covariance of estimate and error, pooled entries";
  return result;
}

CheckResult check_fading_gram_convergence(std::uint64_t seed) {
  const int counts[3] = {64, 128, 256};
  double averaged[3] = {0.0, 0.0, 0.0};
  for (int idx = 0; idx < 3; ++idx) {
    const int antennas = counts[idx];
    SystemGeometry geometry;
    geometry.antennas = antennas;
    geometry.users = 4;
    geometry.theta = Vector(4);
    geometry.theta << 0.7, 0.15, -0.35, -1.0;
    FadingProfile profile = FadingProfile::uniform(4, 1.0, 1.0);
    const ChannelModel model(geometry, profile);
    RngStream rng(seed, 17, static_cast<std::uint64_t>(idx));
    ChannelDraw draw;
    double acc = 0.0;
    const int draws = 100;
    for (int t = 0; t < draws; ++t) {
      model.draw_into(rng, draw);
      const CMatrix gram = draw.fading.adjoint() * draw.fading / static_cast<double>(antennas);
      const CMatrix residual = gram - CMatrix::Identity(4, 4);
      acc += residual.cwiseAbs().maxCoeff();
    }
    averaged[idx] = acc / draws;
  }

  std::ostringstream detail;
  detail << "avg max |gram/M - I|: " << averaged[0] << " -> " << averaged[1] << " -> "
         << averaged[2];
  CheckResult result;
  result.name = "fading gram convergence";
  result.measured = averaged[2];
  result.threshold = averaged[1];
  result.pass = averaged[0] > averaged[1] && averaged[1] > averaged[2];
  result.detail = detail.str();
  return result;
}

CheckResult check_estimate_gram_convergence(std::uint64_t seed) {
  const int counts[3] = {64, 128, 256};
  double averaged[3] = {0.0, 0.0, 0.0};
  const double k = 1.0;
  const double beta = 1.0;
  const double p_p = 10.0;
  const double target = beta * (k + p_p * beta / (1.0 + p_p * beta)) / (k + 1.0);
  for (int idx = 0; idx < 3; ++idx) {
    const int antennas = counts[idx];
    const SystemGeometry geometry = bench_geometry(antennas);
    FadingProfile profile = FadingProfile::uniform(2, k, beta);
    PilotScheme scheme;
    scheme.tau = 2;
    scheme.p_u = p_p / 2.0;
    const ChannelModel model(geometry, profile);
    RngStream rng(seed, 23, static_cast<std::uint64_t>(idx));
    ChannelDraw draw;
    EstimateDraw est;
    double acc = 0.0;
    const int draws = 100;
    for (int t = 0; t < draws; ++t) {
      model.draw_into(rng, draw);
      mmse_estimate_into(draw, profile, scheme, rng, est);
      const double normalized = est.channel_est.col(0).squaredNorm() / antennas;
      acc += std::abs(normalized - target);
    }
    averaged[idx] = acc / draws;
  }

  std::ostringstream detail;
  detail << "avg |norm2/M - limit|: " << averaged[0] << " -> " << averaged[1] << " -> "
         << averaged[2];
  CheckResult result;
  result.name = "estimate gram convergence";
  result.measured = averaged[2];
  result.threshold = averaged[1];
  result.pass = averaged[0] > averaged[1] && averaged[1] > averaged[2];
  result.detail = detail.str();
  return result;
}

CheckResult check_inverse_gram_mean(std::uint64_t trials, std::uint64_t seed) {
  const int antennas = 16;
  const int users = 4;
  SystemGeometry geometry;
  geometry.antennas = antennas;
  geometry.users = users;
  geometry.theta = Vector(users);
  geometry.theta << 0.6, 0.1, -0.4, -0.9;
  FadingProfile profile = FadingProfile::uniform(users, 0.0, 1.0);
  const ChannelModel model(geometry, profile);
  RngStream rng(seed);
  ChannelDraw draw;
  Accumulator diag;
  diag.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    model.draw_into(rng, draw);
    diag.add(gram_inverse_diagonal(draw.fading)[0]);
  }
  const double target = 1.0 / (antennas - users);
  const double z = z_score(diag.stats(), target);

  CheckResult result;
  result.name = "inverse gram mean (Rayleigh)";
  result.measured = z;
  result.threshold = 4.0;
  result.pass = z <= 4.0;
  result.detail = "mean inverse-gram diagonal vs 1/(M-N)";
  return result;
}

// Rayleigh closed forms written out independently of the general expressions
double rayleigh_mrc_perfect(int antennas, const Vector& beta, double p_u, int n) {
  double interference = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (i != n) interference += beta[i];
  }
  return rate_bits(p_u * beta[n] * (antennas + 1) / (p_u * interference + 1.0));
}

double rayleigh_mrc_imperfect(int antennas, const Vector& beta, double p_u, int tau, int n) {
  double interference = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (i != n) interference += beta[i];
  }
  const double bn = beta[n];
  const double num = tau * p_u * p_u * bn * bn * (antennas + 1);
  const double den =
      p_u * (tau * p_u * bn + 1.0) * interference + (tau + 1.0) * p_u * bn + 1.0;
  return rate_bits(num / den);
}

CheckResult check_reduction_identities(std::uint64_t seed) {
  RngStream rng(seed, 31, 0);
  const int antennas = 50;
  const int users = 4;
  Vector theta(users);
  Vector beta(users);
  for (int n = 0; n < users; ++n) {
    theta[n] = (rng.uniform() - 0.5) * 3.0;
    beta[n] = 0.2 + rng.uniform();
  }
  FadingProfile rayleigh;
  rayleigh.k_factor = Vector::Zero(users);
  rayleigh.beta = beta;
  const double p_u = 3.1622776601683795;  // 5 dB
  const int tau = 8;

  double worst = 0.0;
  const Vector perfect = approx_mrc_perfect(antennas, rayleigh, theta, p_u);
  const Vector imperfect = approx_mrc_imperfect(antennas, rayleigh, theta, p_u, tau);
  for (int n = 0; n < users; ++n) {
    worst = std::max(worst, std::abs(perfect[n] - rayleigh_mrc_perfect(antennas, beta, p_u, n)));
    worst = std::max(worst,
                     std::abs(imperfect[n] - rayleigh_mrc_imperfect(antennas, beta, p_u, tau, n)));
  }

  CheckResult result;
  result.name = "Rayleigh reduction identities";
  result.measured = worst;
  result.threshold = 1e-12;
  result.pass = worst <= 1e-12;
  result.detail = "general closed forms at K=0 vs Rayleigh forms";
  return result;
}

CheckResult check_high_pilot_collapse(std::uint64_t seed) {
  RngStream rng(seed, 37, 0);
  const int antennas = 40;
  const int users = 4;
  Vector theta(users);
  FadingProfile profile;
  profile.k_factor = Vector(users);
  profile.beta = Vector(users);
  for (int n = 0; n < users; ++n) {
    theta[n] = (rng.uniform() - 0.5) * 3.0;
    profile.k_factor[n] = 5.0 * rng.uniform();
    profile.beta[n] = 0.2 + rng.uniform();
  }
  const double p_u = 1000.0;
  const int tau = 1000000000;  // pilot power 1e12

  double worst = 0.0;
  const Vector mrc_p = approx_mrc_perfect(antennas, profile, theta, p_u);
  const Vector mrc_ip = approx_mrc_imperfect(antennas, profile, theta, p_u, tau);
  const Vector zf_p = approx_zf_perfect(antennas, profile, theta, p_u);
  const Vector zf_ip = approx_zf_imperfect(antennas, profile, theta, p_u, tau);
  for (int n = 0; n < users; ++n) {
    worst = std::max(worst, std::abs(mrc_p[n] - mrc_ip[n]));
    worst = std::max(worst, std::abs(zf_p[n] - zf_ip[n]));
  }

  CheckResult result;
  result.name = "high pilot-power collapse";
  result.measured = worst;
  result.threshold = 1e-6;
  result.pass = worst <= 1e-6;
  result.detail = "imperfect-CSI forms vs perfect-CSI forms at huge pilot power";
  return result;
}

CheckResult check_det_equiv_equality(std::uint64_t seed) {
  RngStream rng(seed, 41, 0);
  int mismatches = 0;
  for (int it = 0; it < 200; ++it) {
    ScalingLaw law;
    law.alpha = 2.0 * rng.uniform();
    law.e_u = 1.0 + 200.0 * rng.uniform();
    const int antennas = 32 + static_cast<int>(rng.uniform() * 1000.0);
    const double beta = 0.01 + rng.uniform();
    const double k = rng.uniform() < 0.25 ? 0.0 : 10.0 * rng.uniform();
    const int tau = 4 + static_cast<int>(rng.uniform() * 30.0);
    const Csi csi = rng.uniform() < 0.5 ? Csi::Perfect : Csi::Imperfect;
    const double mrc = deterministic_equivalent(law, antennas, beta, k, tau, csi, Receiver::Mrc);
    const double zf = deterministic_equivalent(law, antennas, beta, k, tau, csi, Receiver::Zf);
    if (mrc != zf) ++mismatches;
  }

  CheckResult result;
  result.name = "deterministic equivalent receiver equality";
  result.measured = mismatches;
  result.threshold = 0.0;
  result.pass = mismatches == 0;
  result.detail = "bitwise equality of MRC and ZF equivalents, 200 random laws";
  return result;
}

}  // namespace

bool ValidationReport::all_pass() const {
  for (const CheckResult& check : checks) {
    if (!check.pass) return false;
  }
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const CheckResult& check : checks) {
    out << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": measured "
        << check.measured << " vs threshold " << check.threshold;
    if (!check.detail.empty()) out << " (" << check.detail << ")";
    out << '\n';
  }
  out << (all_pass() ? "validation passed" : "validation FAILED") << '\n';
  return out.str();
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  const std::uint64_t draws = options.draws;
  const std::uint64_t trials = std::max<std::uint64_t>(draws / 2, 16);
  const double bias = options.phi_perturbation;

  std::uint64_t salt = 0;
  auto next_seed = [&] { return mix64(options.seed ^ ++salt); };

  report.checks.push_back(check_fading_gram_convergence(options.seed));
  for (int antennas : {8, 32}) {
    for (double k : {0.0, 1.0, 10.0}) {
      report.checks.push_back(check_fading_moments(antennas, k, draws, next_seed(), bias));
    }
  }
  for (double k : {0.0, 1.0, 10.0}) {
    for (double p_p : {1.0, 10.0}) {
      report.checks.push_back(check_estimate_moments(32, k, p_p, draws, next_seed(), bias));
    }
  }
  for (double k : {0.0, 3.98}) {
    report.checks.push_back(check_error_variance(k, trials, next_seed()));
  }
  report.checks.push_back(check_orthogonality(trials, next_seed()));
  report.checks.push_back(check_estimate_gram_convergence(options.seed));
  report.checks.push_back(check_inverse_gram_mean(trials, next_seed()));
  report.checks.push_back(check_reduction_identities(options.seed));
  report.checks.push_back(check_high_pilot_collapse(options.seed));
  report.checks.push_back(check_det_equiv_equality(options.seed));
  return report;
}

}  // namespace rmimo
