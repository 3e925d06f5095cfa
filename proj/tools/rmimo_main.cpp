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
// Command-line front end; all functionality goes through the C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmimo.h"

namespace {

// exit codes: 0 success, 1 generic, 2 config, 3 validation, 4 numerical guard
int exit_code(rm_status status) {
  switch (status) {
    case RM_OK: return 0;
    case RM_ERR_CONFIG: return 2;
    case RM_ERR_VALIDATION: return 3;
    case RM_ERR_NUMERIC: return 4;
    default: return 1;
  }
}

int fail(rm_status status) {
  std::fprintf(stderr, "error: %s\n", rm_last_error());
  return exit_code(status);
}

struct StringOut {
  char* text = nullptr;
  ~StringOut() { rm_string_free(text); }
};

int run_single(const rm_point_params& params) {
  std::vector<double> sim(params.users), approx(params.users), err(params.users);
  rm_point_result result{};
  result.per_user_sim = sim.data();
  result.per_user_approx = approx.data();
  result.per_user_std_error = err.data();
  const rm_status status = rm_point_run(&params, &result);
  if (status != RM_OK) return fail(status);

  std::printf("single point: M=%d N=%d K=%g dB p_u=%g dB tau=%d T=%d %s %s\n", params.antennas,
              params.users, params.k_db, params.p_u_db, params.tau, params.coherence_symbols,
              params.receiver == RM_RECEIVER_ZF ? "zf" : "mrc",
              params.csi == RM_CSI_IMPERFECT ? "imperfect" : "perfect");
  std::printf("per-user rates (bits/s/Hz), simulated vs closed-form approximation:\n");
  for (int n = 0; n < params.users; ++n) {
    std::printf("  user %2d: sim %.6f +/- %.6f   approx %.6f\n", n, sim[n], err[n], approx[n]);
  }
  std::printf("sum rate: sim %.6f +/- %.6f, approx %.6f, det-equiv %.6f (discarded %" PRIu64
              " trials)\n",
              result.sum_sim, result.sum_std_error, result.sum_approx, result.sum_det_equiv,
              result.discarded);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rmimo: uplink massive-MIMO rate laboratory for Ricean fading"};
  app.require_subcommand(1);

  // ---- single ----
  rm_point_params point{};
  rm_point_params_init(&point);
  std::string receiver = "mrc";
  std::string csi = "perfect";
  auto* single = app.add_subcommand("single", "evaluate one operating point");
  single->add_option("-M,--antennas", point.antennas, "BS antenna count");
  single->add_option("-N,--users", point.users, "user count");
  single->add_option("--K-dB", point.k_db, "Ricean K-factor in dB (-inf for Rayleigh)");
  single->add_option("--p-u-dB", point.p_u_db, "per-user transmit power in dB");
  single->add_option("--tau", point.tau, "pilot symbols (0 = users)");
  single->add_option("--T", point.coherence_symbols, "coherence interval in symbols");
  single->add_option("--receiver", receiver, "mrc or zf");
  single->add_option("--csi", csi, "perfect or imperfect");
  single->add_option("--trials", point.trials, "Monte Carlo trials");
  single->add_option("--seed", point.master_seed, "master seed");
  single->add_option("--drop-seed", point.drop_seed, "user-drop seed");
  single->add_option("--workers", point.workers, "worker threads");

  // ---- sweep ----
  std::string config_path;
  std::string out_path = "sweep.csv";
  std::string plot_path;
  std::uint64_t seed_override = 0;
  std::uint64_t trials_override = 0;
  int workers_override = 0;
  bool redrop = false;
  bool seed_set = false, trials_set = false, workers_set = false;
  auto* sweep = app.add_subcommand("sweep", "run a configured sweep and write CSV");
  sweep->add_option("--config", config_path, "config file path")->required();
  sweep->add_option("--out", out_path, "output CSV path");
  sweep->add_option("--plot-script", plot_path, "also write a plot script here");
  sweep->add_option("--seed", seed_override, "override master seed")
      ->each([&](const std::string&) { seed_set = true; });
  sweep->add_option("--trials", trials_override, "override trial count")
      ->each([&](const std::string&) { trials_set = true; });
  sweep->add_option("--workers", workers_override, "override worker threads")
      ->each([&](const std::string&) { workers_set = true; });
  sweep->add_flag("--redrop-per-point", redrop, "redraw user positions at every grid point");

  // ---- moments ----
  rm_moments_params moments{};
  rm_moments_params_init(&moments);
  auto* moments_cmd = app.add_subcommand("moments", "closed-form column moments vs Monte Carlo");
  moments_cmd->add_option("-M,--antennas", moments.antennas, "BS antenna count");
  moments_cmd->add_option("-N,--users", moments.users, "user count");
  moments_cmd->add_option("--K-dB", moments.k_db, "Ricean K-factor in dB");
  moments_cmd->add_option("--p-p", moments.pilot_power, "pilot power, linear");
  moments_cmd->add_option("--draws", moments.draws, "Monte Carlo draws");
  moments_cmd->add_option("--seed", moments.seed, "seed");

  // ---- validate ----
  std::uint64_t validate_seed = 0;
  std::uint64_t validate_draws = 0;
  auto* validate_cmd = app.add_subcommand("validate", "run the built-in validation suite");
  validate_cmd->add_option("--seed", validate_seed, "seed (0 = default)");
  validate_cmd->add_option("--trials,--draws", validate_draws, "draw budget per check (0 = default)");

  // ---- plan ----
  double plan_alpha = 1.0, plan_e_u_db = 20.0, plan_beta = 1.0, plan_k_db = 6.0;
  int plan_tau = 10;
  std::string plan_csi = "perfect";
  std::vector<int> plan_grid{64, 128, 256, 512, 1024};
  auto* plan_cmd = app.add_subcommand("plan", "deterministic equivalents for a power-scaling law");
  plan_cmd->add_option("--alpha", plan_alpha, "scaling exponent");
  plan_cmd->add_option("--E-u-dB", plan_e_u_db, "power budget in dB");
  plan_cmd->add_option("--beta", plan_beta, "large-scale gain, linear");
  plan_cmd->add_option("--K-dB", plan_k_db, "Ricean K-factor in dB");
  plan_cmd->add_option("--tau", plan_tau, "pilot symbols");
  plan_cmd->add_option("--csi", plan_csi, "perfect or imperfect");
  plan_cmd->add_option("-M,--antennas", plan_grid, "antenna counts to tabulate");

  CLI11_PARSE(app, argc, argv);

  if (single->parsed()) {
    point.receiver = receiver == "zf" ? RM_RECEIVER_ZF : RM_RECEIVER_MRC;
    point.csi = csi == "imperfect" ? RM_CSI_IMPERFECT : RM_CSI_PERFECT;
    return run_single(point);
  }

  if (sweep->parsed()) {
    rm_config* config = nullptr;
    rm_status status = rm_config_load(config_path.c_str(), &config);
    if (status != RM_OK) return fail(status);
    std::unique_ptr<rm_config, decltype(&rm_config_free)> config_guard(config, rm_config_free);
    if (seed_set && (status = rm_config_set_seed(config, seed_override)) != RM_OK)
      return fail(status);
    if (trials_set && (status = rm_config_set_trials(config, trials_override)) != RM_OK)
      return fail(status);
    if (workers_set && (status = rm_config_set_workers(config, workers_override)) != RM_OK)
      return fail(status);
    if (redrop && (status = rm_config_set_redrop(config, 1)) != RM_OK) return fail(status);

    rm_sweep* result = nullptr;
    status = rm_sweep_run(config, &result);
    if (status != RM_OK) return fail(status);
    std::unique_ptr<rm_sweep, decltype(&rm_sweep_free)> sweep_guard(result, rm_sweep_free);

    status = rm_sweep_write_csv(result, out_path.c_str());
    if (status != RM_OK) return fail(status);
    std::printf("wrote %zu rows to %s\n", rm_sweep_row_count(result), out_path.c_str());
    std::printf("drop mode: %s; pilot noise redrawn every trial\n",
                redrop ? "users re-dropped per sweep point" : "one fixed drop for the sweep");
    if (!plot_path.empty()) {
      status = rm_sweep_write_plot_script(result, plot_path.c_str(), out_path.c_str());
      if (status != RM_OK) return fail(status);
      std::printf("wrote plot script to %s\n", plot_path.c_str());
    }
    return 0;
  }

  if (moments_cmd->parsed()) {
    StringOut report;
    const rm_status status = rm_moments_report(&moments, &report.text);
    if (status != RM_OK) return fail(status);
    std::fputs(report.text, stdout);
    return 0;
  }

  if (validate_cmd->parsed()) {
    StringOut report;
    const rm_status status = rm_validate(validate_seed, validate_draws, &report.text);
    if (report.text != nullptr) std::fputs(report.text, stdout);
    if (status == RM_OK) return 0;
    if (status == RM_ERR_VALIDATION) return 3;
    return fail(status);
  }

  if (plan_cmd->parsed()) {
    rm_plan_params params{};
    params.alpha = plan_alpha;
    params.e_u_db = plan_e_u_db;
    params.beta = plan_beta;
    params.k_db = plan_k_db;
    params.tau = plan_tau;
    params.csi = plan_csi == "imperfect" ? RM_CSI_IMPERFECT : RM_CSI_PERFECT;
    params.antenna_grid = plan_grid.data();
    params.antenna_count = plan_grid.size();
    StringOut report;
    const rm_status status = rm_plan_report(&params, &report.text);
    if (status != RM_OK) return fail(status);
    std::fputs(report.text, stdout);
    return 0;
  }

  return 1;
}
