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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rmimo/analytic.hpp"
#include "rmimo/experiments.hpp"
#include "rmimo/rates.hpp"

using namespace rmimo;

namespace {

const char* kSmallConfig = R"(
# desk-size antenna sweep
[scenario]
cell_radius_m = 1000
r_h_m = 100
v = 3.8
sigma_dB = 8
N = 4
drop_seed = 7

[sweep]
kind = m_sweep
grid = 24, 48
p_u_dB = 10
K_dB = 6
tau = 4
T = 196

[mc]
trials = 200
master_seed = 11
workers = 1
)";

std::string count_lines(const std::string& text) {
  std::ostringstream out;
  out << std::count(text.begin(), text.end(), '\n');
  return out.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("config: defaults mirror the standard cell setup") {
  const ExperimentConfig config = parse_config(
      "[sweep]\n"
      "grid = 50, 100\n"
      "p_u_dB = 10\n"
      "K_dB = 6\n");
  CHECK(config.scenario.cell_radius_m == 1000.0);
  CHECK(config.scenario.hole_radius_m == 100.0);
  CHECK(config.scenario.pathloss_exponent == 3.8);
  CHECK(config.scenario.shadow_sigma_db == 8.0);
  CHECK(config.scenario.users == 10);
  CHECK(config.sweep.coherence_symbols == 196);
  CHECK(config.mc.trials == 10000);
  CHECK(config.sweep.receivers.size() == 2);
  CHECK(config.sweep.csi_states.size() == 2);
  CHECK_FALSE(config.redrop_per_point);
}

TEST_CASE("config: unknown keys are a hard error") {
  CHECK_THROWS_AS(parse_config("[sweep]\ngrid = 10\np_u_dB = 10\nK_dB = 0\nspacing = 0.7\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nusers = 4\n"), ConfigError);  // key is N
  CHECK_THROWS_AS(parse_config("[nonsense]\nx = 1\n"), ConfigError);
}

TEST_CASE("config: malformed and inconsistent inputs are rejected") {
  // duplicate key
  CHECK_THROWS_AS(parse_config("[sweep]\ngrid = 10\ngrid = 20\np_u_dB = 10\nK_dB = 0\n"),
                  ConfigError);
  // missing grid
  CHECK_THROWS_AS(parse_config("[sweep]\np_u_dB = 10\nK_dB = 0\n"), ConfigError);
  // both power modes
  CHECK_THROWS_AS(
      parse_config("[sweep]\ngrid = 20\np_u_dB = 10\nE_u_dB = 20\nK_dB = 0\n"), ConfigError);
  // neither power mode
  CHECK_THROWS_AS(parse_config("[sweep]\ngrid = 20\nK_dB = 0\n"), ConfigError);
  // grid not strictly increasing
  CHECK_THROWS_AS(parse_config("[sweep]\ngrid = 20, 20\np_u_dB = 10\nK_dB = 0\n"), ConfigError);
  // ZF needs more antennas than users
  CHECK_THROWS_AS(parse_config("[scenario]\nN = 10\n[sweep]\ngrid = 10\np_u_dB = 10\nK_dB = 0\n"),
                  ConfigError);
  // k_sweep takes its K values from the grid
  CHECK_THROWS_AS(
      parse_config("[sweep]\nkind = k_sweep\ngrid = 0, 6\np_u_dB = 10\nK_dB = 3\nM = 64\n"),
      ConfigError);
  // tau below the user count
  CHECK_THROWS_AS(
      parse_config("[scenario]\nN = 8\n[sweep]\ngrid = 20\np_u_dB = 10\nK_dB = 0\ntau = 4\n"),
      ConfigError);
  // unparseable number
  CHECK_THROWS_AS(parse_config("[sweep]\ngrid = ten\np_u_dB = 10\nK_dB = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[mc]\ntrials = 50\n[sweep]\ngrid = 20\np_u_dB = 10\nK_dB = 0\n"),
                  ConfigError);
}

TEST_CASE("config: K in dB accepts -inf for Rayleigh fading") {
  const ExperimentConfig config = parse_config(
      "[scenario]\nN = 4\n[sweep]\ngrid = 16, 32\np_u_dB = 10\nK_dB = -inf, 6\n");
  REQUIRE(config.sweep.k_db.size() == 2);
  CHECK(std::isinf(config.sweep.k_db[0]));
  CHECK(db_to_linear(config.sweep.k_db[0]) == 0.0);
}

TEST_CASE("sweep: row count is the cartesian product of the axes") {
  const ExperimentConfig config = parse_config(kSmallConfig);
  const std::vector<SweepRow> rows = run_sweep(config);
  CHECK(rows.size() == 8);  // 2 grid points x 1 K x 2 receivers x 2 CSI
  // ordering: grid-major, receiver before CSI
  CHECK(rows[0].antennas == 24);
  CHECK(rows[0].receiver == Receiver::Mrc);
  CHECK(rows[0].csi == Csi::Perfect);
  CHECK(rows[1].csi == Csi::Imperfect);
  CHECK(rows[2].receiver == Receiver::Zf);
  CHECK(rows[4].antennas == 48);
  for (const SweepRow& row : rows) {
    CHECK(row.users == 4);
    CHECK(row.trials == 200);
    CHECK(row.seed == 11);
    CHECK(row.scenario_id == 0);
  }
}

TEST_CASE("sweep: scaled-power rows wire p_u to the power law exactly") {
  ExperimentConfig config = parse_config(
      "[scenario]\nN = 4\n"
      "[sweep]\nkind = m_sweep\ngrid = 32, 64\nE_u_dB = 20\nalpha = 1\nK_dB = 0\ntau = 4\n"
      "[mc]\ntrials = 100\n");
  for (const SweepRow& row : run_sweep(config)) {
    CHECK(row.alpha == 1.0);
    CHECK(row.p_u_db == 20.0 - 10.0 * std::log10(static_cast<double>(row.antennas)));
  }
  config = parse_config(
      "[scenario]\nN = 4\n"
      "[sweep]\nkind = m_sweep\ngrid = 32, 64\nE_u_dB = 20\nalpha = 0.5\nK_dB = 0\ntau = 4\n"
      "[mc]\ntrials = 100\n");
  for (const SweepRow& row : run_sweep(config)) {
    CHECK(row.alpha == 0.5);
    CHECK(row.p_u_db == 20.0 - 5.0 * std::log10(static_cast<double>(row.antennas)));
  }
}

TEST_CASE("sweep: imperfect rows carry the pilot-overhead prefactor, perfect rows do not") {
  const ExperimentConfig config = parse_config(kSmallConfig);
  const std::vector<SweepRow> rows = run_sweep(config);
  const ScenarioDrop drop = sweep_drop(config.scenario, 0);

  for (const SweepRow& row : rows) {
    FadingProfile profile;
    profile.k_factor = Vector::Constant(4, db_to_linear(row.k_db));
    profile.beta = drop.beta;
    const double p_u = db_to_linear(row.p_u_db);
    const Vector approx =
        approx_rate(row.antennas, profile, drop.theta, p_u, 4, row.receiver, row.csi);
    double expected = 0.0;
    for (int n = 0; n < 4; ++n) expected += approx[n];
    if (row.csi == Csi::Imperfect) expected *= (196.0 - 4.0) / 196.0;
    CHECK(row.rate_approx == doctest::Approx(expected).epsilon(1e-14));

    SystemGeometry geometry;
    geometry.antennas = row.antennas;
    geometry.users = 4;
    geometry.theta = drop.theta;
    PilotScheme scheme;
    scheme.tau = 4;
    scheme.p_u = p_u;
    McPlan plan;
    plan.trials = 200;
    plan.master_seed = 11;
    plan.scenario_id = 0;
    plan.coherence_symbols = 196;
    const RateEstimate estimate =
        estimate_rate(geometry, profile, scheme, row.receiver, row.csi, plan);
    CHECK(row.rate_sim == estimate.sum_rate);
  }
}

TEST_CASE("sweep: k_sweep varies the K axis at fixed antennas") {
  const ExperimentConfig config = parse_config(
      "[scenario]\nN = 4\n"
      "[sweep]\nkind = k_sweep\ngrid = -inf, 0, 6\np_u_dB = 10\nM = 32\ntau = 4\n"
      "[mc]\ntrials = 100\n");
  const std::vector<SweepRow> rows = run_sweep(config);
  CHECK(rows.size() == 12);
  CHECK(std::isinf(rows[0].k_db));
  for (const SweepRow& row : rows) CHECK(row.antennas == 32);
}

TEST_CASE("sweep: alpha_sweep walks the scaling exponent at fixed antennas") {
  const ExperimentConfig config = parse_config(
      "[scenario]\nN = 4\n"
      "[sweep]\nkind = alpha_sweep\ngrid = 0.5, 1, 2\nE_u_dB = 20\nK_dB = 6\nM = 32\ntau = 4\n"
      "[mc]\ntrials = 100\n");
  const std::vector<SweepRow> rows = run_sweep(config);
  CHECK(rows.size() == 12);
  for (const SweepRow& row : rows) {
    CHECK(row.antennas == 32);
    CHECK(row.p_u_db == 20.0 - 10.0 * row.alpha * std::log10(32.0));
  }
  CHECK(rows.front().alpha == 0.5);
  CHECK(rows.back().alpha == 2.0);
}

TEST_CASE("sweep: redrop-per-point changes the scenario id and the drop") {
  ExperimentConfig config = parse_config(kSmallConfig);
  config.redrop_per_point = true;
  const std::vector<SweepRow> rows = run_sweep(config);
  CHECK(rows[0].scenario_id == 0);
  CHECK(rows[4].scenario_id == 1);
  const ScenarioDrop drop0 = sweep_drop(config.scenario, 0);
  const ScenarioDrop drop1 = sweep_drop(config.scenario, 1);
  CHECK((drop0.beta - drop1.beta).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("csv: exact header, one line per row, newline-terminated") {
  const ExperimentConfig config = parse_config(kSmallConfig);
  const std::vector<SweepRow> rows = run_sweep(config);
  const std::string csv = csv_string(rows);
  CHECK(count_lines(csv) == "9");
  CHECK(csv.back() == '\n');
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "scenario_id,M,N,K_dB,p_u_dB,alpha,receiver,csi,rate_sim,rate_approx,"
        "rate_det_equiv,stderr,trials,discarded,seed");
}

TEST_CASE("csv: numbers round-trip at nine significant digits") {
  const ExperimentConfig config = parse_config(kSmallConfig);
  const std::vector<SweepRow> rows = run_sweep(config);
  std::stringstream stream(csv_string(rows));
  std::string line;
  std::getline(stream, line);  // header
  while (std::getline(stream, line)) {
    std::stringstream fields(line);
    std::string field;
    int index = 0;
    while (std::getline(fields, field, ',')) {
      // numeric columns: K_dB..stderr occupy indices 3..11 except receiver/csi
      if ((index >= 3 && index <= 5) || (index >= 8 && index <= 11)) {
        const double value = std::strtod(field.c_str(), nullptr);
        char buffer[40];
        std::snprintf(buffer, sizeof(buffer), "%.9g", value);
        CHECK(field == buffer);
      }
      ++index;
    }
    CHECK(index == 15);
  }
}

TEST_CASE("csv: rejects an empty table and surfaces filesystem failures") {
  std::vector<SweepRow> empty;
  CHECK_THROWS_AS(csv_string(empty), std::invalid_argument);
  const std::vector<SweepRow> rows = run_sweep(parse_config(kSmallConfig));
  CHECK_THROWS_AS(emit_csv(rows, "/nonexistent-dir/out.csv"), std::runtime_error);
}

TEST_CASE("sweep determinism: worker count never changes the CSV bytes") {
  ExperimentConfig config = parse_config(kSmallConfig);
  config.mc.workers = 1;
  const std::string csv_single = csv_string(run_sweep(config));
  config.mc.workers = 8;
  const std::string csv_pool = csv_string(run_sweep(config));
  CHECK(csv_single == csv_pool);
}

TEST_CASE("plot script: one curve declaration per receiver, CSI and K combination") {
  const ExperimentConfig config = parse_config(
      "[scenario]\nN = 4\ndrop_seed = 3\n"
      "[sweep]\nkind = m_sweep\ngrid = 24, 48\np_u_dB = 10\nK_dB = -inf, 6\ntau = 4\n"
      "[mc]\ntrials = 100\n");
  const std::vector<SweepRow> rows = run_sweep(config);
  CHECK(rows.size() == 16);
  const std::string script = plot_script_string(rows, "fig1.csv");
  CHECK(count_occurrences(script, "ax.plot(") == 8);  // 2 receivers x 2 CSI x 2 K
  CHECK(script.find("fig1.csv") != std::string::npos);
  CHECK(script.find("X_COLUMN = \"M\"") != std::string::npos);

  std::vector<SweepRow> empty;
  CHECK_THROWS_AS(plot_script_string(empty, "x.csv"), std::invalid_argument);
}

TEST_CASE("plot script: runs unmodified against the emitted CSV") {
  if (std::system("python3 -c 'import matplotlib' > /dev/null 2>&1") != 0) {
    MESSAGE("python3/matplotlib unavailable; skipping the smoke run");
    return;
  }
  const auto dir = std::filesystem::temp_directory_path() / "rmimo_plot_smoke";
  std::filesystem::create_directories(dir);
  const ExperimentConfig config = parse_config(kSmallConfig);
  const std::vector<SweepRow> rows = run_sweep(config);
  emit_csv(rows, (dir / "sweep.csv").string());
  emit_plot_script(rows, (dir / "plot.py").string(), "sweep.csv");
  const std::string command = "cd " + dir.string() + " && python3 plot.py > /dev/null 2>&1";
  CHECK(std::system(command.c_str()) == 0);
  CHECK(std::filesystem::exists(dir / "sweep.csv.png"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("validation suite: default run is green") {
  const ValidationReport report = run_validation();
  for (const CheckResult& check : report.checks) {
    INFO(check.name, ": measured ", check.measured, " threshold ", check.threshold);
    CHECK(check.pass);
  }
  CHECK(report.all_pass());
  CHECK(report.to_string().find("[FAIL]") == std::string::npos);
}

TEST_CASE("validation suite: a biased steering overlap turns cross-moment checks red") {
  ValidationOptions options;
  options.phi_perturbation = 0.1;
  const ValidationReport report = run_validation(options);
  CHECK_FALSE(report.all_pass());
  bool cross_moment_failed = false;
  for (const CheckResult& check : report.checks) {
    if (!check.pass && check.name.find("column moments") != std::string::npos) {
      cross_moment_failed = true;
    }
  }
  CHECK(cross_moment_failed);
}

TEST_CASE("validation suite: thresholds scale with a tiny draw budget") {
  ValidationOptions options;
  options.draws = 100;
  const ValidationReport report = run_validation(options);
  for (const CheckResult& check : report.checks) {
    INFO(check.name, ": measured ", check.measured, " threshold ", check.threshold);
    CHECK(check.pass);
  }
}

TEST_CASE("reports: moments and plan tables render") {
  const std::string moments = moments_report(16, 2, 0.0, 10.0, 2000, 3);
  CHECK(moments.find("closed") != std::string::npos);
  CHECK(moments.find("mc") != std::string::npos);
  const std::string plan = plan_report(1.0, 20.0, 1.0, 6.0, 10, Csi::Perfect, {64, 128});
  CHECK(plan.find("det-equiv") != std::string::npos);
  CHECK(plan.find("limit") != std::string::npos);
  CHECK_THROWS_AS(plan_report(1.0, 20.0, 1.0, 6.0, 10, Csi::Perfect, {}), std::invalid_argument);
}
