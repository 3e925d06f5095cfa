/* SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * C interface of the rmimo uplink rate laboratory. All functions return a
 * status code; rm_last_error() describes the most recent failure on the
 * calling thread. Objects behind opaque handles are freed with their
 * matching *_free function, strings returned through char** with
 * rm_string_free().
 */

#ifndef RMIMO_H
#define RMIMO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rm_status {
  RM_OK = 0,
  RM_ERR = 1,         /* invalid argument or internal failure */
  RM_ERR_CONFIG = 2,  /* malformed or inconsistent configuration */
  RM_ERR_VALIDATION = 3,
  RM_ERR_NUMERIC = 4, /* numerical guard tripped (singular gram, discards) */
  RM_ERR_IO = 5
} rm_status;

typedef enum rm_receiver { RM_RECEIVER_MRC = 0, RM_RECEIVER_ZF = 1 } rm_receiver;
typedef enum rm_csi { RM_CSI_PERFECT = 0, RM_CSI_IMPERFECT = 1 } rm_csi;

const char* rm_version(void);
const char* rm_last_error(void);
void rm_string_free(char* text);

/* ---- sweep configuration and execution ---------------------------------- */

typedef struct rm_config rm_config;
typedef struct rm_sweep rm_sweep;

rm_status rm_config_load(const char* path, rm_config** out);
rm_status rm_config_parse(const char* text, rm_config** out);
void rm_config_free(rm_config* config);

/* command-line overrides applied on top of the config file */
rm_status rm_config_set_trials(rm_config* config, uint64_t trials);
rm_status rm_config_set_seed(rm_config* config, uint64_t master_seed);
rm_status rm_config_set_workers(rm_config* config, int workers);
rm_status rm_config_set_redrop(rm_config* config, int redrop_per_point);

rm_status rm_sweep_run(const rm_config* config, rm_sweep** out);
void rm_sweep_free(rm_sweep* sweep);
size_t rm_sweep_row_count(const rm_sweep* sweep);
rm_status rm_sweep_csv(const rm_sweep* sweep, char** out);
rm_status rm_sweep_write_csv(const rm_sweep* sweep, const char* path);
rm_status rm_sweep_plot_script(const rm_sweep* sweep, const char* csv_relpath, char** out);
rm_status rm_sweep_write_plot_script(const rm_sweep* sweep, const char* path,
                                     const char* csv_relpath);

/* ---- single-point evaluation -------------------------------------------- */

typedef struct rm_point_params {
  int antennas;
  int users;
  double k_db;  /* Ricean K-factor in dB; -inf means Rayleigh */
  double p_u_db;
  int tau;      /* 0 selects the minimum legal length (= users) */
  int coherence_symbols;
  rm_receiver receiver;
  rm_csi csi;
  uint64_t trials;
  uint64_t master_seed;
  uint64_t drop_seed;
  int workers;
  double cell_radius_m;
  double hole_radius_m;
  double pathloss_exponent;
  double shadow_sigma_db;
} rm_point_params;

void rm_point_params_init(rm_point_params* params);

/* Arrays must hold `users` doubles; any pointer may be NULL to skip it. */
typedef struct rm_point_result {
  double* per_user_sim;
  double* per_user_approx;
  double* per_user_std_error;
  double sum_sim;
  double sum_approx;
  double sum_det_equiv;
  double sum_std_error;
  uint64_t discarded;
} rm_point_result;

rm_status rm_point_run(const rm_point_params* params, rm_point_result* result);

/* ---- closed forms vs Monte Carlo moment report -------------------------- */

typedef struct rm_moments_params {
  int antennas;
  int users;
  double k_db;
  double pilot_power;
  uint64_t draws;
  uint64_t seed;
} rm_moments_params;

void rm_moments_params_init(rm_moments_params* params);
rm_status rm_moments_report(const rm_moments_params* params, char** out);

/* ---- deterministic equivalents and power-scaling limits ----------------- */

typedef struct rm_plan_params {
  double alpha;
  double e_u_db;
  double beta;
  double k_db;
  int tau;
  rm_csi csi;
  const int* antenna_grid;
  size_t antenna_count;
} rm_plan_params;

rm_status rm_plan_report(const rm_plan_params* params, char** out);

/* ---- built-in validation suite ------------------------------------------
 * Returns RM_OK when every check passes, RM_ERR_VALIDATION otherwise; the
 * report text is produced either way. `draws` of 0 selects the default
 * budget. */
rm_status rm_validate(uint64_t seed, uint64_t draws, char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* RMIMO_H */
