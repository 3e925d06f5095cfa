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
//
// End-to-end acceptance suite. Each numbered criterion prints one PASS/FAIL
// line; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rmimo/analytic.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/estimation.hpp"
#include "rmimo/experiments.hpp"
#include "rmimo/numeric.hpp"
#include "rmimo/rates.hpp"
#include "rmimo/rng.hpp"

using namespace rmimo;

namespace {

// Fixed cell drop used by the rate-tightness criteria. Chosen once from the
// standard scenario law and pinned; every run re-derives it from this seed.
constexpr std::uint64_t kFixtureDropSeed = 5956;

constexpr int kUsers = 10;
constexpr int kTau = 10;
constexpr int kSymbols = 196;

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double log2p1(double x) { return std::log1p(x) * 1.4426950408889634; }

double sum(const Vector& v) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += v[i];
  return acc;
}

struct Watch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

ScenarioDrop fixture_drop() {
  RngStream rng(kFixtureDropSeed);
  return drop_users(1000.0, 100.0, 3.8, 8.0, kUsers, rng);
}

SystemGeometry fixture_geometry(const ScenarioDrop& drop, int antennas) {
  SystemGeometry g;
  g.antennas = antennas;
  g.users = kUsers;
  g.theta = drop.theta;
  return g;
}

FadingProfile fixture_profile(const ScenarioDrop& drop, double k_db) {
  FadingProfile profile;
  profile.k_factor = Vector::Constant(kUsers, db_to_linear(k_db));
  profile.beta = drop.beta;
  return profile;
}

// ---- criterion 1: column-moment oracle suite ------------------------------

struct MomentCheck {
  double worst_z = 0.0;
  std::string worst_name;
  void update(double z, const std::string& name) {
    if (z > worst_z) {
      worst_z = z;
      worst_name = name;
    }
  }
};

double z_score(const MeanVar& mv, double target) {
  const double se = mv.std_error();
  if (se == 0.0) return mv.mean == target ? 0.0 : 1e18;
  return std::abs(mv.mean - target) / se;
}

void criterion_1() {
  const Watch watch;
  const int antennas = 32;
  const std::uint64_t draws = 200000;
  SystemGeometry geometry;
  geometry.antennas = antennas;
  geometry.users = 2;
  geometry.theta = Vector(2);
  geometry.theta << 0.4, -0.1;
  Vector beta(2);
  beta << 1.0, 0.6;

  MomentCheck check;
  std::uint64_t salt = 0;
  for (double k : {0.0, 1.0, 10.0}) {
    FadingProfile profile;
    profile.k_factor = Vector::Constant(2, k);
    profile.beta = beta;
    const ChannelModel model(geometry, profile);

    // fading-matrix moments
    {
      const MomentSet closed = fading_moments(antennas, profile, geometry.theta);
      RngStream rng(901, 0, ++salt);
      ChannelDraw draw;
      std::vector<double> n2[2], n4[2], cross;
      for (int n = 0; n < 2; ++n) {
        n2[n].reserve(draws);
        n4[n].reserve(draws);
      }
      cross.reserve(draws);
      for (std::uint64_t t = 0; t < draws; ++t) {
        model.draw_into(rng, draw);
        for (int n = 0; n < 2; ++n) {
          const double norm2 = draw.fading.col(n).squaredNorm();
          n2[n].push_back(norm2);
          n4[n].push_back(norm2 * norm2);
        }
        cross.push_back(std::norm(draw.fading.col(0).dot(draw.fading.col(1))));
      }
      const std::string tag = "fading K=" + std::to_string(int(k));
      for (int n = 0; n < 2; ++n) {
        check.update(z_score(mean_variance(n2[n]), closed.norm2[n]), tag + " norm2");
        check.update(z_score(mean_variance(n4[n]), closed.norm4[n]), tag + " norm4");
      }
      check.update(z_score(mean_variance(cross), closed.cross2(0, 1)), tag + " cross");
    }

    // estimate moments at both pilot powers
    for (double p_p : {1.0, 10.0}) {
      const MomentSet closed = estimate_moments(antennas, profile, geometry.theta, p_p);
      PilotScheme scheme;
      scheme.tau = 2;
      scheme.p_u = p_p / 2.0;
      RngStream rng(902, static_cast<std::uint64_t>(p_p), ++salt);
      ChannelDraw draw;
      EstimateDraw est;
      std::vector<double> n2[2], n4[2], cross;
      for (int n = 0; n < 2; ++n) {
        n2[n].reserve(draws);
        n4[n].reserve(draws);
      }
      cross.reserve(draws);
      for (std::uint64_t t = 0; t < draws; ++t) {
        model.draw_into(rng, draw);
        mmse_estimate_into(draw, profile, scheme, rng, est);
        for (int n = 0; n < 2; ++n) {
          const double norm2 = est.channel_est.col(n).squaredNorm();
          n2[n].push_back(norm2);
          n4[n].push_back(norm2 * norm2);
        }
        cross.push_back(std::norm(est.channel_est.col(0).dot(est.channel_est.col(1))));
      }
      const std::string tag =
          "estimate K=" + std::to_string(int(k)) + " p_p=" + std::to_string(int(p_p));
      for (int n = 0; n < 2; ++n) {
        check.update(z_score(mean_variance(n2[n]), closed.norm2[n]), tag + " norm2");
        check.update(z_score(mean_variance(n4[n]), closed.norm4[n]), tag + " norm4");
      }
      check.update(z_score(mean_variance(cross), closed.cross2(0, 1)), tag + " cross");
    }
  }

  const double elapsed = watch.seconds();
  char detail[160];
  std::snprintf(detail, sizeof(detail), "worst %.2f sigma at %s; %.1f s (target < 60 s)",
                check.worst_z, check.worst_name.c_str(), elapsed);
  report(1, "column-moment oracle suite, 2e5 draws within 4 sigma",
         check.worst_z <= 4.0 && elapsed < 60.0, detail);
}

// ---- criterion 2: estimation-error variance -------------------------------

void criterion_2() {
  const int antennas = 8;
  const std::uint64_t trials = 100000;
  SystemGeometry geometry;
  geometry.antennas = antennas;
  geometry.users = 2;
  geometry.theta = Vector(2);
  geometry.theta << 0.4, -0.1;
  Vector beta(2);
  beta << 0.1, 1.0;

  double worst = 0.0;
  for (double k : {0.0, 3.98}) {
    FadingProfile profile;
    profile.k_factor = Vector::Constant(2, k);
    profile.beta = beta;
    PilotScheme scheme;
    scheme.tau = 2;
    scheme.p_u = 5.0;  // pilot power 10
    const ChannelModel model(geometry, profile);
    RngStream rng(911, 0, static_cast<std::uint64_t>(k * 100));
    ChannelDraw draw;
    EstimateDraw est;
    Vector acc = Vector::Zero(2);
    Complex mean_acc[2] = {Complex(0, 0), Complex(0, 0)};
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
    const double count = double(trials) * antennas;
    for (int n = 0; n < 2; ++n) {
      const double var = acc[n] / count - std::norm(mean_acc[n] / count);
      const double target = error_variance(beta[n], k, 10.0);
      worst = std::max(worst, std::abs(var - target) / target);
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "worst relative deviation %.4f (tolerance 0.03)", worst);
  report(2, "estimation-error variance vs closed form, 1e5 trials", worst <= 0.03, detail);
}

// ---- criterion 3: inverse-gram mean in Rayleigh fading ---------------------

void criterion_3() {
  const int antennas = 16, users = 4;
  const std::uint64_t trials = 100000;
  SystemGeometry geometry;
  geometry.antennas = antennas;
  geometry.users = users;
  geometry.theta = Vector(users);
  geometry.theta << 0.6, 0.1, -0.4, -0.9;
  const FadingProfile profile = FadingProfile::uniform(users, 0.0, 1.0);
  const ChannelModel model(geometry, profile);
  RngStream rng(921);
  ChannelDraw draw;
  std::vector<double> diag;
  diag.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    model.draw_into(rng, draw);
    diag.push_back(gram_inverse_diagonal(draw.fading)[0]);
  }
  const MeanVar mv = mean_variance(diag);
  const double target = 1.0 / (antennas - users);
  const double z = z_score(mv, target);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "mean %.6f vs 1/(M-N) %.6f, %.2f sigma", mv.mean, target,
                z);
  report(3, "inverse-gram diagonal mean, Rayleigh, 1e5 trials within 4 sigma", z <= 4.0, detail);
}

// ---- criterion 4: rate-approximation tightness at fixed power --------------

void criterion_4() {
  const Watch watch;
  const ScenarioDrop drop = fixture_drop();
  const double p_u = db_to_linear(10.0);
  PilotScheme scheme;
  scheme.tau = kTau;
  scheme.p_u = p_u;

  double worst = 0.0;
  std::string worst_name;
  for (int antennas : {50, 100, 200}) {
    const SystemGeometry geometry = fixture_geometry(drop, antennas);
    for (double k_db : {-1e300, 6.0}) {
      const FadingProfile profile = fixture_profile(drop, k_db);
      for (Receiver kind : {Receiver::Mrc, Receiver::Zf}) {
        for (Csi csi : {Csi::Perfect, Csi::Imperfect}) {
          McPlan plan;
          plan.trials = 10000;
          plan.master_seed = 99;
          plan.coherence_symbols = kSymbols;
          const RateEstimate estimate =
              estimate_rate(geometry, profile, scheme, kind, csi, plan);
          const Vector approx =
              approx_rate(antennas, profile, drop.theta, p_u, kTau, kind, csi);
          const double prefactor =
              csi == Csi::Imperfect ? double(kSymbols - kTau) / kSymbols : 1.0;
          const double rel =
              std::abs(sum(approx) * prefactor - estimate.sum_rate) / estimate.sum_rate;
          if (rel > worst) {
            worst = rel;
            worst_name = "M=" + std::to_string(antennas) +
                         (k_db < -1e200 ? " K=-inf " : " K=6dB ") + to_string(kind) + " " +
                         to_string(csi);
          }
        }
      }
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "worst |approx-sim|/sim %.4f at %s; %.0f s (target < 600 s)", worst,
                worst_name.c_str(), watch.seconds());
  report(4, "closed-form rates track simulation within 3%, fixed drop, 1e4 trials",
         worst <= 0.03 && watch.seconds() < 600.0, detail);
}

// ---- criterion 5: power scaled as 1/M reaches the fixed-limit rate ---------

void criterion_5() {
  const ScenarioDrop drop = fixture_drop();
  const double e_u = db_to_linear(20.0);
  double limit = 0.0;
  for (int n = 0; n < kUsers; ++n) limit += log2p1(e_u * drop.beta[n]);

  bool pass = true;
  double worst_rel = 0.0;
  for (double k_db : {-1e300, 6.0}) {
    const FadingProfile profile = fixture_profile(drop, k_db);
    for (Receiver kind : {Receiver::Mrc, Receiver::Zf}) {
      double gaps[2];
      int gi = 0;
      for (int antennas : {128, 512}) {
        const SystemGeometry geometry = fixture_geometry(drop, antennas);
        PilotScheme scheme;
        scheme.tau = kTau;
        scheme.p_u = e_u / antennas;
        McPlan plan;
        plan.trials = 10000;
        plan.master_seed = 99;
        plan.coherence_symbols = kSymbols;
        const RateEstimate estimate =
            estimate_rate(geometry, profile, scheme, kind, Csi::Perfect, plan);
        gaps[gi++] = std::abs(estimate.sum_rate - limit);
      }
      const double rel512 = gaps[1] / limit;
      worst_rel = std::max(worst_rel, rel512);
      if (rel512 > 0.05 || !(gaps[1] < gaps[0])) pass = false;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "worst |sum-limit|/limit at M=512: %.4f (tolerance 0.05); gaps shrink 128->512",
                worst_rel);
  report(5, "1/M power scaling approaches the fixed-rate limit", pass, detail);
}

// ---- criterion 6: 1/sqrt(M) scaling trend in Rayleigh fading ----------------

void criterion_6() {
  const ScenarioDrop drop = fixture_drop();
  const double e_u = db_to_linear(20.0);
  const FadingProfile profile = fixture_profile(drop, -1e300);  // K = 0
  Vector limits(kUsers);
  for (int n = 0; n < kUsers; ++n) {
    limits[n] = log2p1(kTau * e_u * e_u * drop.beta[n] * drop.beta[n]);
  }

  bool pass = true;
  double worst_margin = 1e18;
  for (Receiver kind : {Receiver::Mrc, Receiver::Zf}) {
    Vector previous = Vector::Constant(kUsers, 1e18);
    for (int antennas : {128, 512, 2048}) {
      const SystemGeometry geometry = fixture_geometry(drop, antennas);
      PilotScheme scheme;
      scheme.tau = kTau;
      scheme.p_u = e_u / std::sqrt(double(antennas));
      McPlan plan;
      plan.trials = 10000;
      plan.master_seed = 99;
      plan.coherence_symbols = kSymbols;
      const RateEstimate estimate =
          estimate_rate(geometry, profile, scheme, kind, Csi::Imperfect, plan);
      for (int n = 0; n < kUsers; ++n) {
        const double distance = std::abs(estimate.per_user[n] - limits[n]);
        worst_margin = std::min(worst_margin, previous[n] - distance);
        if (!(distance < previous[n])) pass = false;
        previous[n] = distance;
      }
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "per-user distance to the Rayleigh limit shrinks along M=128,512,2048 "
                "(min shrink %.3g bits)",
                worst_margin);
  report(6, "1/sqrt(M) scaling moves every user toward its pilot-limited rate", pass, detail);
}

// ---- criterion 7: huge-K agreement with the deterministic-channel limits ---

void criterion_7() {
  const ScenarioDrop drop = fixture_drop();
  const int antennas = 100;
  const double p_u = db_to_linear(10.0);
  FadingProfile profile;
  profile.k_factor = Vector::Constant(kUsers, 1e8);
  profile.beta = drop.beta;

  const Vector lim_mrc = los_limit_rate(antennas, drop.beta, drop.theta, p_u, Receiver::Mrc);
  const Vector lim_zf = los_limit_rate(antennas, drop.beta, drop.theta, p_u, Receiver::Zf);
  const Vector mrc_p = approx_mrc_perfect(antennas, profile, drop.theta, p_u);
  const Vector mrc_ip = approx_mrc_imperfect(antennas, profile, drop.theta, p_u, kTau);
  const Vector zf_p = approx_zf_perfect(antennas, profile, drop.theta, p_u);
  const Vector zf_ip = approx_zf_imperfect(antennas, profile, drop.theta, p_u, kTau);

  double worst = 0.0;
  for (int n = 0; n < kUsers; ++n) {
    worst = std::max({worst, std::abs(mrc_p[n] - lim_mrc[n]), std::abs(mrc_ip[n] - lim_mrc[n]),
                      std::abs(zf_p[n] - lim_zf[n]), std::abs(zf_ip[n] - lim_zf[n]),
                      std::abs(mrc_ip[n] - mrc_p[n]), std::abs(zf_ip[n] - zf_p[n])});
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "worst per-user deviation %.3g bits (tolerance 1e-4)",
                worst);
  report(7, "approximations at K=1e8 meet the deterministic-channel limits", worst <= 1e-4,
         detail);
}

// ---- criterion 8: exact reductions -----------------------------------------

void criterion_8() {
  RngStream rng(941);
  const int antennas = 60, users = 5;
  Vector theta(users);
  Vector beta(users);
  for (int n = 0; n < users; ++n) {
    theta[n] = (rng.uniform() - 0.5) * 3.0;
    beta[n] = 0.05 + rng.uniform();
  }
  const double p_u = 3.16;
  const int tau = 8;

  FadingProfile rayleigh;
  rayleigh.k_factor = Vector::Zero(users);
  rayleigh.beta = beta;

  double worst_rayleigh = 0.0;
  const Vector mrc_p = approx_mrc_perfect(antennas, rayleigh, theta, p_u);
  const Vector mrc_ip = approx_mrc_imperfect(antennas, rayleigh, theta, p_u, tau);
  for (int n = 0; n < users; ++n) {
    double interference = 0.0;
    for (int i = 0; i < users; ++i) {
      if (i != n) interference += beta[i];
    }
    const double rp = log2p1(p_u * beta[n] * (antennas + 1) / (p_u * interference + 1.0));
    const double num = tau * p_u * p_u * beta[n] * beta[n] * (antennas + 1);
    const double den =
        p_u * (tau * p_u * beta[n] + 1.0) * interference + (tau + 1.0) * p_u * beta[n] + 1.0;
    const double rip = log2p1(num / den);
    worst_rayleigh =
        std::max({worst_rayleigh, std::abs(mrc_p[n] - rp), std::abs(mrc_ip[n] - rip)});
  }

  FadingProfile ricean;
  ricean.k_factor = Vector(users);
  ricean.beta = beta;
  for (int n = 0; n < users; ++n) ricean.k_factor[n] = 0.5 + 4.0 * rng.uniform();
  double worst_collapse = 0.0;
  {
    const double big_p_u = 1000.0;
    const int big_tau = 1000000000;  // pilot power 1e12
    const Vector a = approx_mrc_perfect(antennas, ricean, theta, big_p_u);
    const Vector b = approx_mrc_imperfect(antennas, ricean, theta, big_p_u, big_tau);
    const Vector c = approx_zf_perfect(antennas, ricean, theta, big_p_u);
    const Vector d = approx_zf_imperfect(antennas, ricean, theta, big_p_u, big_tau);
    for (int n = 0; n < users; ++n) {
      worst_collapse = std::max({worst_collapse, std::abs(a[n] - b[n]), std::abs(c[n] - d[n])});
    }
  }

  int det_mismatch = 0;
  for (int it = 0; it < 1000; ++it) {
    ScalingLaw law;
    law.alpha = 2.0 * rng.uniform();
    law.e_u = 1.0 + 200.0 * rng.uniform();
    const int m = 32 + static_cast<int>(rng.uniform() * 1000);
    const double b = 0.01 + rng.uniform();
    const double k = rng.uniform() < 0.25 ? 0.0 : 10.0 * rng.uniform();
    const int t = 4 + static_cast<int>(rng.uniform() * 30);
    const Csi csi = rng.uniform() < 0.5 ? Csi::Perfect : Csi::Imperfect;
    if (deterministic_equivalent(law, m, b, k, t, csi, Receiver::Mrc) !=
        deterministic_equivalent(law, m, b, k, t, csi, Receiver::Zf)) {
      ++det_mismatch;
    }
  }

  const bool pass = worst_rayleigh <= 1e-12 && worst_collapse <= 1e-6 && det_mismatch == 0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "Rayleigh reduction %.2g (<=1e-12); pilot collapse %.2g (<=1e-6); "
                "det-equiv mismatches %d",
                worst_rayleigh, worst_collapse, det_mismatch);
  report(8, "closed-form reductions are exact", pass, detail);
}

// ---- criterion 9: the new bounds beat the earlier (M-1) bounds -------------

void criterion_9() {
  RngStream rng(951);
  int violations = 0;
  for (int it = 0; it < 1000; ++it) {
    const int users = 2 + static_cast<int>(rng.uniform() * 5);
    const int antennas = users + 2 + static_cast<int>(rng.uniform() * 250);
    const int tau = users + static_cast<int>(rng.uniform() * 12);
    const double p_u = 0.05 + 30.0 * rng.uniform();
    Vector theta(users), beta(users);
    for (int n = 0; n < users; ++n) {
      theta[n] = (rng.uniform() - 0.5) * 3.0;
      beta[n] = 0.01 + 2.0 * rng.uniform();
    }
    FadingProfile profile;
    profile.k_factor = Vector::Zero(users);
    profile.beta = beta;
    const Vector rate_p = approx_mrc_perfect(antennas, profile, theta, p_u);
    const Vector rate_ip = approx_mrc_imperfect(antennas, profile, theta, p_u, tau);
    const int n = static_cast<int>(rng.uniform() * users);
    double interference = 0.0;
    for (int i = 0; i < users; ++i) {
      if (i != n) interference += beta[i];
    }
    const double prior_p = log2p1(p_u * beta[n] * (antennas - 1) / (p_u * interference + 1.0));
    const double num = tau * p_u * p_u * beta[n] * beta[n] * (antennas - 1);
    const double den =
        p_u * (tau * p_u * beta[n] + 1.0) * interference + (tau + 1.0) * p_u * beta[n] + 1.0;
    const double prior_ip = log2p1(num / den);
    if (!(rate_p[n] > prior_p) || !(rate_ip[n] > prior_ip)) ++violations;
  }
  char detail[80];
  std::snprintf(detail, sizeof(detail), "%d violations in 1000 draws", violations);
  report(9, "Rayleigh forms exceed the earlier lower bounds", violations == 0, detail);
}

// ---- criterion 10: byte-identical sweeps across worker counts --------------

void criterion_10() {
  const std::string config_text =
      "[scenario]\n"
      "N = 10\n"
      "drop_seed = " +
      std::to_string(kFixtureDropSeed) +
      "\n"
      "[sweep]\n"
      "kind = m_sweep\n"
      "grid = 50, 100\n"
      "p_u_dB = 10\n"
      "K_dB = -inf, 6\n"
      "tau = 10\n"
      "[mc]\n"
      "trials = 2000\n"
      "master_seed = 31\n";

  std::string reference;
  bool pass = true;
  for (int workers : {1, 4, 16}) {
    ExperimentConfig config = parse_config(config_text);
    config.mc.workers = workers;
    const std::string csv = csv_string(run_sweep(config));
    if (workers == 1) {
      reference = csv;
    } else if (csv != reference) {
      pass = false;
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "%zu-byte CSV identical for workers 1, 4, 16",
                reference.size());
  report(10, "sweep output is byte-identical across worker counts", pass, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite: fixture drop seed %llu\n",
              static_cast<unsigned long long>(kFixtureDropSeed));
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("acceptance suite: all criteria PASS\n");
  } else {
    std::printf("acceptance suite: %d criterion(s) FAILED\n", g_failures);
  }
  return g_failures;
}
