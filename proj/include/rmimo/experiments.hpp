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
#include <optional>
#include <string>
#include <vector>

#include "rmimo/channel.hpp"
#include "rmimo/types.hpp"

namespace rmimo {

/// Cell-drop parameters; defaults follow the standard urban macro setup.
struct ScenarioConfig {
  double cell_radius_m = 1000.0;
  double hole_radius_m = 100.0;
  double pathloss_exponent = 3.8;
  double shadow_sigma_db = 8.0;
  int users = 10;
  std::uint64_t drop_seed = 1;
};

enum class SweepKind { AntennaSweep, KFactorSweep, AlphaSweep };

/// What varies along the x axis and under which power regime.
///   AntennaSweep  grid holds antenna counts; fixed p_u_db, or e_u_db with
///                 alpha for scaled power p_u = E_u / M^alpha
///   KFactorSweep  grid holds K values in dB (-inf accepted); fixed antennas
///   AlphaSweep    grid holds scaling exponents; fixed antennas, needs e_u_db
struct SweepConfig {
  SweepKind kind = SweepKind::AntennaSweep;
  std::vector<double> grid;  // strictly increasing, nonempty
  std::optional<double> p_u_db;
  std::optional<double> e_u_db;
  double alpha = 1.0;             // used when e_u_db is set on an AntennaSweep
  std::vector<double> k_db;       // curves; ignored for KFactorSweep
  int antennas = 0;               // fixed M for KFactorSweep / AlphaSweep
  int tau = 0;                    // 0 means the minimum legal value (= users)
  int coherence_symbols = 196;
  std::vector<Receiver> receivers{Receiver::Mrc, Receiver::Zf};
  std::vector<Csi> csi_states{Csi::Perfect, Csi::Imperfect};
};

struct McConfig {
  std::uint64_t trials = 10000;
  std::uint64_t master_seed = 1;
  int workers = 1;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  SweepConfig sweep;
  McConfig mc;
  bool redrop_per_point = false;  // default: one fixed drop per sweep

  void validate() const;  // throws ConfigError
};

/// Parses the three-section config format ([scenario], [sweep], [mc],
/// key = value, lists comma-separated). Unknown keys are a hard error.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// One output row; sum rates in bits/s/Hz with the pilot-overhead prefactor
/// already applied to the imperfect-CSI columns.
struct SweepRow {
  std::uint64_t scenario_id = 0;
  int antennas = 0;
  int users = 0;
  double k_db = 0.0;
  double p_u_db = 0.0;
  double alpha = 0.0;
  Receiver receiver = Receiver::Mrc;
  Csi csi = Csi::Perfect;
  double rate_sim = 0.0;
  double rate_approx = 0.0;
  double rate_det_equiv = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t discarded = 0;
  std::uint64_t seed = 0;
};

/// The user drop a sweep uses for the given scenario id (0 unless
/// redrop_per_point is set, in which case ids follow the grid index).
ScenarioDrop sweep_drop(const ScenarioConfig& scenario, std::uint64_t scenario_id);

/// Runs the whole sweep; row order follows (grid index, K, receiver, CSI),
/// never completion order.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

std::string csv_string(const std::vector<SweepRow>& rows);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Self-contained matplotlib script with one curve declaration per
/// receiver x CSI x K combination, reading the CSV by relative path.
std::string plot_script_string(const std::vector<SweepRow>& rows, const std::string& csv_relpath);
void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& path,
                      const std::string& csv_relpath);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::string to_string() const;
};

/// Knobs for the built-in validation suite. `draws` is the Monte Carlo budget
/// per check; statistical thresholds scale with the measured standard errors,
/// so smaller budgets stay green, just with wider tolerances.
/// `phi_perturbation` is a fault-injection hook that biases the steering
/// overlap inside the closed forms; the suite must go red when it is nonzero.
struct ValidationOptions {
  std::uint64_t seed = 20240901;
  std::uint64_t draws = 200000;
  double phi_perturbation = 0.0;
};

/// Cross-validates Monte Carlo simulation against every closed form: column
/// moments, estimation-error variance, large-array convergence, reduction
/// identities, deterministic-equivalent equality and the inverse-Gram mean.
ValidationReport run_validation(const ValidationOptions& options = {});

/// Text table comparing closed-form column moments (fading and estimate)
/// against Monte Carlo estimates, on a bench of evenly spread arrival angles
/// and unit gains.
std::string moments_report(int antennas, int users, double k_db, double pilot_power,
                           std::uint64_t draws, std::uint64_t seed);

/// Text table of per-antenna-count deterministic equivalents plus the
/// power-scaling limit for one user under the law p_u = E_u / M^alpha.
std::string plan_report(double alpha, double e_u_db, double beta, double k_db, int tau, Csi csi,
                        const std::vector<int>& antenna_grid);

}  // namespace rmimo
