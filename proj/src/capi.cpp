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

#include "rmimo.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "rmimo/analytic.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/experiments.hpp"
#include "rmimo/rates.hpp"
#include "rmimo/rng.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* message) { g_last_error = message ? message : ""; }

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out != nullptr) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

// maps the core exception hierarchy onto status codes
template <typename Fn>
rm_status guarded(Fn&& fn) {
  try {
    fn();
    set_error("");
    return RM_OK;
  } catch (const rmimo::ConfigError& e) {
    set_error(e.what());
    return RM_ERR_CONFIG;
  } catch (const rmimo::NumericalGuard& e) {
    set_error(e.what());
    return RM_ERR_NUMERIC;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return RM_ERR;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return RM_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RM_ERR;
  }
}

}  // namespace

struct rm_config {
  rmimo::ExperimentConfig config;
};

struct rm_sweep {
  std::vector<rmimo::SweepRow> rows;
};

extern "C" {

const char* rm_version(void) { return "1.0.0"; }

const char* rm_last_error(void) { return g_last_error.c_str(); }

void rm_string_free(char* text) { std::free(text); }

rm_status rm_config_load(const char* path, rm_config** out) {
  if (path == nullptr || out == nullptr) {
    set_error("rm_config_load: null argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded([&] { *out = new rm_config{rmimo::load_config(path)}; });
}

rm_status rm_config_parse(const char* text, rm_config** out) {
  if (text == nullptr || out == nullptr) {
    set_error("rm_config_parse: null argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded([&] { *out = new rm_config{rmimo::parse_config(text)}; });
}

void rm_config_free(rm_config* config) { delete config; }

rm_status rm_config_set_trials(rm_config* config, uint64_t trials) {
  if (config == nullptr) {
    set_error("rm_config_set_trials: null config");
    return RM_ERR;
  }
  const uint64_t previous = config->config.mc.trials;
  const rm_status status = guarded([&] {
    config->config.mc.trials = trials;
    config->config.validate();
  });
  if (status != RM_OK) config->config.mc.trials = previous;
  return status;
}

rm_status rm_config_set_seed(rm_config* config, uint64_t master_seed) {
  if (config == nullptr) {
    set_error("rm_config_set_seed: null config");
    return RM_ERR;
  }
  config->config.mc.master_seed = master_seed;
  set_error("");
  return RM_OK;
}

rm_status rm_config_set_workers(rm_config* config, int workers) {
  if (config == nullptr) {
    set_error("rm_config_set_workers: null config");
    return RM_ERR;
  }
  const int previous = config->config.mc.workers;
  const rm_status status = guarded([&] {
    config->config.mc.workers = workers;
    config->config.validate();
  });
  if (status != RM_OK) config->config.mc.workers = previous;
  return status;
}

rm_status rm_config_set_redrop(rm_config* config, int redrop_per_point) {
  if (config == nullptr) {
    set_error("rm_config_set_redrop: null config");
    return RM_ERR;
  }
  config->config.redrop_per_point = redrop_per_point != 0;
  set_error("");
  return RM_OK;
}

rm_status rm_sweep_run(const rm_config* config, rm_sweep** out) {
  if (config == nullptr || out == nullptr) {
    set_error("rm_sweep_run: null argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded([&] { *out = new rm_sweep{rmimo::run_sweep(config->config)}; });
}

void rm_sweep_free(rm_sweep* sweep) { delete sweep; }

size_t rm_sweep_row_count(const rm_sweep* sweep) {
  return sweep == nullptr ? 0 : sweep->rows.size();
}

rm_status rm_sweep_csv(const rm_sweep* sweep, char** out) {
  if (sweep == nullptr || out == nullptr) {
    set_error("rm_sweep_csv: null argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded([&] { *out = copy_string(rmimo::csv_string(sweep->rows)); });
}

rm_status rm_sweep_write_csv(const rm_sweep* sweep, const char* path) {
  if (sweep == nullptr || path == nullptr) {
    set_error("rm_sweep_write_csv: null argument");
    return RM_ERR;
  }
  return guarded([&] { rmimo::emit_csv(sweep->rows, path); });
}

rm_status rm_sweep_plot_script(const rm_sweep* sweep, const char* csv_relpath, char** out) {
  if (sweep == nullptr || csv_relpath == nullptr || out == nullptr) {
    set_error("rm_sweep_plot_script: null argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded(
      [&] { *out = copy_string(rmimo::plot_script_string(sweep->rows, csv_relpath)); });
}

rm_status rm_sweep_write_plot_script(const rm_sweep* sweep, const char* path,
                                     const char* csv_relpath) {
  if (sweep == nullptr || path == nullptr || csv_relpath == nullptr) {
    set_error("rm_sweep_write_plot_script: null argument");
    return RM_ERR;
  }
  return guarded([&] { rmimo::emit_plot_script(sweep->rows, path, csv_relpath); });
}

void rm_point_params_init(rm_point_params* params) {
  if (params == nullptr) return;
  params->antennas = 100;
  params->users = 10;
  params->k_db = 6.0;
  params->p_u_db = 10.0;
  params->tau = 0;
  params->coherence_symbols = 196;
  params->receiver = RM_RECEIVER_MRC;
  params->csi = RM_CSI_PERFECT;
  params->trials = 10000;
  params->master_seed = 1;
  params->drop_seed = 1;
  params->workers = 1;
  params->cell_radius_m = 1000.0;
  params->hole_radius_m = 100.0;
  params->pathloss_exponent = 3.8;
  params->shadow_sigma_db = 8.0;
}

rm_status rm_point_run(const rm_point_params* params, rm_point_result* result) {
  if (params == nullptr || result == nullptr) {
    set_error("rm_point_run: null argument");
    return RM_ERR;
  }
  return guarded([&] {
    using namespace rmimo;
    const int users = params->users;
    const int tau = params->tau > 0 ? params->tau : users;

    RngStream drop_rng(params->drop_seed ^ 0x9d5c0fb2a1e34d87ULL, 0, 0);
    const ScenarioDrop drop =
        drop_users(params->cell_radius_m, params->hole_radius_m, params->pathloss_exponent,
                   params->shadow_sigma_db, users, drop_rng);

    SystemGeometry geometry;
    geometry.antennas = params->antennas;
    geometry.users = users;
    geometry.theta = drop.theta;

    FadingProfile profile;
    profile.k_factor = Vector::Constant(users, db_to_linear(params->k_db));
    profile.beta = drop.beta;

    PilotScheme scheme;
    scheme.tau = tau;
    scheme.p_u = db_to_linear(params->p_u_db);

    const Receiver kind = params->receiver == RM_RECEIVER_ZF ? Receiver::Zf : Receiver::Mrc;
    const Csi csi = params->csi == RM_CSI_IMPERFECT ? Csi::Imperfect : Csi::Perfect;

    McPlan plan;
    plan.trials = params->trials;
    plan.master_seed = params->master_seed;
    plan.scenario_id = 0;
    plan.workers = params->workers;
    plan.coherence_symbols = params->coherence_symbols;

    const RateEstimate estimate = estimate_rate(geometry, profile, scheme, kind, csi, plan);
    const Vector approx =
        approx_rate(params->antennas, profile, drop.theta, scheme.p_u, tau, kind, csi);

    const double prefactor =
        csi == Csi::Imperfect
            ? static_cast<double>(params->coherence_symbols - tau) / params->coherence_symbols
            : 1.0;
    double approx_sum = 0.0;
    double det_sum = 0.0;
    const ScalingLaw law{0.0, scheme.p_u};
    for (int n = 0; n < users; ++n) {
      approx_sum += approx[n];
      det_sum += deterministic_equivalent(law, params->antennas, drop.beta[n],
                                          profile.k_factor[n], tau, csi, kind);
      if (result->per_user_sim != nullptr) result->per_user_sim[n] = estimate.per_user[n];
      if (result->per_user_approx != nullptr) result->per_user_approx[n] = approx[n];
      if (result->per_user_std_error != nullptr)
        result->per_user_std_error[n] = estimate.std_error[n];
    }
    result->sum_sim = estimate.sum_rate;
    result->sum_approx = approx_sum * prefactor;
    result->sum_det_equiv = det_sum * prefactor;
    result->sum_std_error = estimate.sum_std_error;
    result->discarded = estimate.discarded;
  });
}

void rm_moments_params_init(rm_moments_params* params) {
  if (params == nullptr) return;
  params->antennas = 32;
  params->users = 2;
  params->k_db = 0.0;
  params->pilot_power = 10.0;
  params->draws = 200000;
  params->seed = 1;
}

rm_status rm_moments_report(const rm_moments_params* params, char** out) {
  if (params == nullptr || out == nullptr) {
    set_error("rm_moments_report: null argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded([&] {
    *out = copy_string(rmimo::moments_report(params->antennas, params->users, params->k_db,
                                             params->pilot_power, params->draws, params->seed));
  });
}

rm_status rm_plan_report(const rm_plan_params* params, char** out) {
  if (params == nullptr || out == nullptr || params->antenna_grid == nullptr ||
      params->antenna_count == 0) {
    set_error("rm_plan_report: null or empty argument");
    return RM_ERR;
  }
  *out = nullptr;
  return guarded([&] {
    const std::vector<int> grid(params->antenna_grid,
                                params->antenna_grid + params->antenna_count);
    const rmimo::Csi csi =
        params->csi == RM_CSI_IMPERFECT ? rmimo::Csi::Imperfect : rmimo::Csi::Perfect;
    *out = copy_string(rmimo::plan_report(params->alpha, params->e_u_db, params->beta,
                                          params->k_db, params->tau, csi, grid));
  });
}

rm_status rm_validate(uint64_t seed, uint64_t draws, char** report_out) {
  if (report_out == nullptr) {
    set_error("rm_validate: null report pointer");
    return RM_ERR;
  }
  *report_out = nullptr;
  bool passed = false;
  const rm_status status = guarded([&] {
    rmimo::ValidationOptions options;
    if (seed != 0) options.seed = seed;
    if (draws != 0) options.draws = draws;
    const rmimo::ValidationReport report = rmimo::run_validation(options);
    passed = report.all_pass();
    *report_out = copy_string(report.to_string());
  });
  if (status != RM_OK) return status;
  if (!passed) {
    set_error("validation suite reported failures");
    return RM_ERR_VALIDATION;
  }
  return RM_OK;
}

}  // extern "C"
