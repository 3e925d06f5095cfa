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

#include "rmimo/rates.hpp"

#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "rmimo/numeric.hpp"

namespace rmimo {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;
constexpr double kMaxDiscardFraction = 1e-3;

double rate_bits(double sinr) { return std::log1p(sinr) * kInvLn2; }

// All per-user SINRs of one realization, from the Gram matrix of the receiver
// input. `inflation` is 1 for perfect CSI, the estimation-error noise factor
// otherwise.
void sinrs_from_gram(const CMatrix& gram, double p_u, double inflation, Receiver kind,
                     Vector& out) {
  const Eigen::Index users = gram.rows();
  out.resize(users);
  if (kind == Receiver::Mrc) {
    for (Eigen::Index n = 0; n < users; ++n) {
      const double signal = gram(n, n).real();
      double interference = 0.0;
      for (Eigen::Index i = 0; i < users; ++i) {
        if (i == n) continue;
        interference += std::norm(gram(n, i));
      }
      out[n] = p_u * signal * signal / (p_u * interference + inflation * signal);
    }
    return;
  }
  // ZF: p_u over the inverse-Gram diagonal
  CMatrix herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(users - 1);
  if (!(lo > 0.0) || hi > lo * kConditionLimit)
    throw SingularGram("gram matrix condition number exceeds guard");
  Eigen::LLT<CMatrix> llt(herm);
  if (llt.info() != Eigen::Success) throw SingularGram("gram matrix Cholesky failed");
  const CMatrix inverse = llt.solve(CMatrix::Identity(users, users));
  for (Eigen::Index n = 0; n < users; ++n) {
    out[n] = p_u / (inflation * inverse(n, n).real());
  }
}

struct TrialTable {
  std::vector<double> values;  // trials x users, trial-major
  std::vector<unsigned char> kept;
};

}  // namespace

Vector gram_inverse_diagonal(const CMatrix& mat) {
  const Eigen::Index users = mat.cols();
  CMatrix gram = mat.adjoint() * mat;
  gram = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(users - 1);
  if (!(lo > 0.0) || hi > lo * kConditionLimit)
    throw SingularGram("gram matrix condition number exceeds guard");
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw SingularGram("gram matrix Cholesky failed");
  const CMatrix inverse = llt.solve(CMatrix::Identity(users, users));
  Vector out(users);
  for (Eigen::Index n = 0; n < users; ++n) out[n] = inverse(n, n).real();
  return out;
}

double noise_inflation(const FadingProfile& profile, const PilotScheme& scheme) {
  const double p_p = scheme.pilot_power();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < profile.beta.size(); ++i) {
    acc += scheme.p_u * error_variance(profile.beta[i], profile.k_factor[i], p_p);
  }
  return acc + 1.0;
}

double sinr_perfect(const CMatrix& channel, int user, double p_u, Receiver kind) {
  if (!(p_u > 0.0)) throw std::invalid_argument("sinr_perfect: p_u must be > 0");
  const Eigen::Index users = channel.cols();
  if (user < 0 || user >= users) throw std::invalid_argument("sinr_perfect: user out of range");
  if (kind == Receiver::Zf && channel.rows() < users + 1)
    throw std::invalid_argument("sinr_perfect: ZF needs antennas >= users + 1");
  CMatrix gram = channel.adjoint() * channel;
  Vector sinrs;
  sinrs_from_gram(gram, p_u, 1.0, kind, sinrs);
  return sinrs[user];
}

double sinr_imperfect(const EstimateDraw& est, const FadingProfile& profile,
                      const PilotScheme& scheme, int user, Receiver kind) {
  if (!(scheme.p_u > 0.0)) throw std::invalid_argument("sinr_imperfect: p_u must be > 0");
  const Eigen::Index users = est.channel_est.cols();
  if (user < 0 || user >= users) throw std::invalid_argument("sinr_imperfect: user out of range");
  if (kind == Receiver::Zf && est.channel_est.rows() < users + 1)
    throw std::invalid_argument("sinr_imperfect: ZF needs antennas >= users + 1");
  CMatrix gram = est.channel_est.adjoint() * est.channel_est;
  Vector sinrs;
  sinrs_from_gram(gram, scheme.p_u, noise_inflation(profile, scheme), kind, sinrs);
  return sinrs[user];
}

double sum_rate(const Vector& per_user, Csi csi, int coherence_symbols, int tau) {
  if (tau > coherence_symbols)
    throw std::invalid_argument("sum_rate: tau must not exceed the coherence interval");
  double total = 0.0;
  for (Eigen::Index n = 0; n < per_user.size(); ++n) total += per_user[n];
  if (csi == Csi::Imperfect) {
    total *= static_cast<double>(coherence_symbols - tau) / coherence_symbols;
  }
  return total;
}

RateEstimate estimate_rate(const SystemGeometry& geometry, const FadingProfile& profile,
                           const PilotScheme& scheme, Receiver kind, Csi csi,
                           const McPlan& plan) {
  if (plan.trials < 100) throw std::invalid_argument("estimate_rate: need at least 100 trials");
  if (!(scheme.p_u > 0.0)) throw std::invalid_argument("estimate_rate: p_u must be > 0");
  if (kind == Receiver::Zf && geometry.antennas < geometry.users + 1)
    throw std::invalid_argument("estimate_rate: ZF needs antennas >= users + 1");
  if (csi == Csi::Imperfect) scheme.validate(geometry.users);

  const ChannelModel model(geometry, profile);
  const int users = geometry.users;
  const std::uint64_t trials = plan.trials;
  const double inflation = csi == Csi::Imperfect ? noise_inflation(profile, scheme) : 1.0;

  TrialTable table;
  table.values.assign(trials * users, 0.0);
  table.kept.assign(trials, 0);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    ChannelDraw draw;
    EstimateDraw est;
    CMatrix gram;
    Vector sinrs;
    for (std::uint64_t t = begin; t < end; ++t) {
      RngStream rng(plan.master_seed, plan.scenario_id, t);
      model.draw_into(rng, draw);
      try {
        if (csi == Csi::Imperfect) {
          mmse_estimate_into(draw, profile, scheme, rng, est);
          gram.noalias() = est.channel_est.adjoint() * est.channel_est;
        } else {
          gram.noalias() = draw.channel.adjoint() * draw.channel;
        }
        sinrs_from_gram(gram, scheme.p_u, inflation, kind, sinrs);
      } catch (const SingularGram&) {
        continue;  // discarded, counted below
      }
      for (int n = 0; n < users; ++n) {
        table.values[t * users + n] = rate_bits(sinrs[n]);
      }
      table.kept[t] = 1;
    }
  };

  const int workers = plan.workers > 1 ? plan.workers : 1;
  if (workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, trials);
      const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  std::uint64_t retained = 0;
  for (std::uint64_t t = 0; t < trials; ++t) retained += table.kept[t];
  const std::uint64_t discarded = trials - retained;
  if (static_cast<double>(discarded) > kMaxDiscardFraction * static_cast<double>(trials))
    throw TooManyDiscards("estimate_rate: discarded fraction exceeds 1e-3");

  RateEstimate out;
  out.trials = trials;
  out.discarded = discarded;
  out.per_user.resize(users);
  out.std_error.resize(users);

  std::vector<double> buffer(retained);
  for (int n = 0; n < users; ++n) {
    std::size_t k = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      if (table.kept[t]) buffer[k++] = table.values[t * users + n];
    }
    const MeanVar mv = mean_variance(buffer);
    out.per_user[n] = mv.mean;
    out.std_error[n] = mv.std_error();
  }

  // stderr of the per-trial user sums; users within a trial are correlated
  std::size_t k = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (!table.kept[t]) continue;
    double s = 0.0;
    for (int n = 0; n < users; ++n) s += table.values[t * users + n];
    buffer[k++] = s;
  }
  const MeanVar sum_mv = mean_variance(buffer);
  const double prefactor =
      csi == Csi::Imperfect
          ? static_cast<double>(plan.coherence_symbols - scheme.tau) / plan.coherence_symbols
          : 1.0;
  out.sum_rate = sum_rate(out.per_user, csi, plan.coherence_symbols, scheme.tau);
  out.sum_std_error = prefactor * sum_mv.std_error();
  return out;
}

}  // namespace rmimo
