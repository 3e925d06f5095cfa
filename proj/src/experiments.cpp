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

#include "rmimo/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rmimo/analytic.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/rates.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

namespace {

// keeps the drop stream disjoint from the trial streams even when the same
// seed is reused as master_seed
constexpr std::uint64_t kDropSalt = 0x9d5c0fb2a1e34d87ULL;

std::string format_sig9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

const char* sweep_x_column(SweepKind kind) {
  switch (kind) {
    case SweepKind::AntennaSweep: return "M";
    case SweepKind::KFactorSweep: return "K_dB";
    case SweepKind::AlphaSweep: return "alpha";
  }
  return "M";
}

}  // namespace

ScenarioDrop sweep_drop(const ScenarioConfig& scenario, std::uint64_t scenario_id) {
  RngStream rng(scenario.drop_seed ^ kDropSalt, scenario_id, 0);
  return drop_users(scenario.cell_radius_m, scenario.hole_radius_m, scenario.pathloss_exponent,
                    scenario.shadow_sigma_db, scenario.users, rng);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const ScenarioConfig& sc = config.scenario;
  const SweepConfig& sw = config.sweep;
  const int users = sc.users;
  const int tau = sw.tau > 0 ? sw.tau : users;
  const int symbols = sw.coherence_symbols;

  std::map<std::uint64_t, ScenarioDrop> drops;
  auto drop_for = [&](std::uint64_t scenario_id) -> const ScenarioDrop& {
    auto it = drops.find(scenario_id);
    if (it == drops.end()) {
      it = drops.emplace(scenario_id, sweep_drop(sc, scenario_id)).first;
    }
    return it->second;
  };

  std::vector<SweepRow> rows;
  for (std::size_t gi = 0; gi < sw.grid.size(); ++gi) {
    const double grid_value = sw.grid[gi];
    const int antennas =
        sw.kind == SweepKind::AntennaSweep ? static_cast<int>(grid_value) : sw.antennas;

    double alpha = 0.0;
    double p_u_db = 0.0;
    double e_u_linear = 0.0;
    if (sw.e_u_db.has_value()) {
      alpha = sw.kind == SweepKind::AlphaSweep ? grid_value : sw.alpha;
      p_u_db = *sw.e_u_db - 10.0 * alpha * std::log10(static_cast<double>(antennas));
      e_u_linear = db_to_linear(*sw.e_u_db);
    } else {
      p_u_db = *sw.p_u_db;
      e_u_linear = db_to_linear(p_u_db);  // alpha = 0: the budget is the power itself
    }
    const double p_u = db_to_linear(p_u_db);
    const ScalingLaw law{alpha, e_u_linear};

    const std::uint64_t scenario_id = config.redrop_per_point ? gi : 0;
    const ScenarioDrop& drop = drop_for(scenario_id);

    SystemGeometry geometry;
    geometry.antennas = antennas;
    geometry.users = users;
    geometry.theta = drop.theta;

    const std::vector<double> k_values =
        sw.kind == SweepKind::KFactorSweep ? std::vector<double>{grid_value} : sw.k_db;

    for (double k_db : k_values) {
      FadingProfile profile;
      profile.k_factor = Vector::Constant(users, db_to_linear(k_db));
      profile.beta = drop.beta;

      for (Receiver receiver : sw.receivers) {
        for (Csi csi : sw.csi_states) {
          PilotScheme scheme;
          scheme.tau = tau;
          scheme.p_u = p_u;

          McPlan plan;
          plan.trials = config.mc.trials;
          plan.master_seed = config.mc.master_seed;
          plan.scenario_id = scenario_id;
          plan.workers = config.mc.workers;
          plan.coherence_symbols = symbols;

          const RateEstimate estimate =
              estimate_rate(geometry, profile, scheme, receiver, csi, plan);

          const Vector approx =
              approx_rate(antennas, profile, drop.theta, p_u, tau, receiver, csi);
          const double prefactor =
              csi == Csi::Imperfect ? static_cast<double>(symbols - tau) / symbols : 1.0;
          double approx_sum = 0.0;
          for (Eigen::Index n = 0; n < approx.size(); ++n) approx_sum += approx[n];
          approx_sum *= prefactor;

          double det_sum = 0.0;
          for (int n = 0; n < users; ++n) {
            det_sum += deterministic_equivalent(law, antennas, drop.beta[n],
                                                profile.k_factor[n], tau, csi, receiver);
          }
          det_sum *= prefactor;

          SweepRow row;
          row.scenario_id = scenario_id;
          row.antennas = antennas;
          row.users = users;
          row.k_db = k_db;
          row.p_u_db = p_u_db;
          row.alpha = alpha;
          row.receiver = receiver;
          row.csi = csi;
          row.rate_sim = estimate.sum_rate;
          row.rate_approx = approx_sum;
          row.rate_det_equiv = det_sum;
          row.std_error = estimate.sum_std_error;
          row.trials = estimate.trials;
          row.discarded = estimate.discarded;
          row.seed = config.mc.master_seed;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::string csv_string(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("csv_string: rows must be nonempty");
  std::ostringstream out;
  out << "scenario_id,M,N,K_dB,p_u_dB,alpha,receiver,csi,rate_sim,rate_approx,"
         "rate_det_equiv,stderr,trials,discarded,seed\n";
  for (const SweepRow& row : rows) {
    out << row.scenario_id << ',' << row.antennas << ',' << row.users << ','
        << format_sig9(row.k_db) << ',' << format_sig9(row.p_u_db) << ','
        << format_sig9(row.alpha) << ',' << to_string(row.receiver) << ','
        << to_string(row.csi) << ',' << format_sig9(row.rate_sim) << ','
        << format_sig9(row.rate_approx) << ',' << format_sig9(row.rate_det_equiv) << ','
        << format_sig9(row.std_error) << ',' << row.trials << ',' << row.discarded << ','
        << row.seed << '\n';
  }
  return out.str();
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  const std::string body = csv_string(rows);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("emit_csv: cannot open " + path);
  file << body;
  if (!file) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::string plot_script_string(const std::vector<SweepRow>& rows, const std::string& csv_relpath) {
  if (rows.empty()) throw std::invalid_argument("plot_script_string: rows must be nonempty");

  // x axis: the column that actually varies; curves: everything else
  const bool antennas_vary = rows.front().antennas != rows.back().antennas;
  const bool alpha_varies = rows.front().alpha != rows.back().alpha;
  SweepKind kind = SweepKind::KFactorSweep;
  if (antennas_vary) kind = SweepKind::AntennaSweep;
  else if (alpha_varies) kind = SweepKind::AlphaSweep;
  const std::string x_column = sweep_x_column(kind);

  struct Combo {
    std::string receiver;
    std::string csi;
    std::string k_db;  // empty when K runs along the x axis
  };
  std::vector<Combo> combos;
  auto seen = [&](const Combo& c) {
    for (const Combo& existing : combos) {
      if (existing.receiver == c.receiver && existing.csi == c.csi && existing.k_db == c.k_db)
        return true;
    }
    return false;
  };
  for (const SweepRow& row : rows) {
    Combo combo{to_string(row.receiver), to_string(row.csi),
                kind == SweepKind::KFactorSweep ? std::string() : format_sig9(row.k_db)};
    if (!seen(combo)) combos.push_back(combo);
  }

  std::ostringstream out;
  out << "#!/usr/bin/env python3\n";
  out << "# Generated uplink sum-rate plot; reads the CSV emitted with it.\n";
  const bool fixed_drop = rows.front().scenario_id == rows.back().scenario_id;
  out << "# Drop mode: " << (fixed_drop ? "one fixed user drop for the whole sweep"
                                        : "users re-dropped per sweep point")
      << "; pilot noise redrawn every trial.\n";
  out << "import csv\n";
  out << "import matplotlib\n";
  out << "matplotlib.use(\"Agg\")\n";
  out << "import matplotlib.pyplot as plt\n\n";
  out << "CSV_PATH = \"" << csv_relpath << "\"\n";
  out << "X_COLUMN = \"" << x_column << "\"\n\n";
  out << "with open(CSV_PATH, newline=\"\") as fh:\n";
  out << "    ROWS = list(csv.DictReader(fh))\n\n";
  out << "def series(receiver, csi, k_db=None):\n";
  out << "    pts = [(float(r[X_COLUMN]), float(r[\"rate_sim\"])) for r in ROWS\n";
  out << "           if r[\"receiver\"] == receiver and r[\"csi\"] == csi\n";
  out << "           and (k_db is None or r[\"K_dB\"] == k_db)]\n";
  out << "    pts.sort()\n";
  out << "    return [p[0] for p in pts], [p[1] for p in pts]\n\n";
  out << "fig, ax = plt.subplots(figsize=(7.0, 5.0))\n";
  for (const Combo& combo : combos) {
    std::string label = combo.receiver + " " + combo.csi;
    std::string args = "\"" + combo.receiver + "\", \"" + combo.csi + "\"";
    if (!combo.k_db.empty()) {
      label += " K=" + combo.k_db + " dB";
      args += ", \"" + combo.k_db + "\"";
    }
    out << "x, y = series(" << args << "); ax.plot(x, y, marker=\"o\", label=\"" << label
        << "\")\n";
  }
  out << "ax.set_xlabel(X_COLUMN)\n";
  out << "ax.set_ylabel(\"uplink sum rate (bits/s/Hz)\")\n";
  out << "ax.grid(True, alpha=0.4)\n";
  out << "ax.legend(fontsize=8)\n";
  out << "fig.tight_layout()\n";
  out << "fig.savefig(CSV_PATH + \".png\", dpi=150)\n";
  out << "print(\"wrote\", CSV_PATH + \".png\")\n";
  return out.str();
}

void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& path,
                      const std::string& csv_relpath) {
  const std::string body = plot_script_string(rows, csv_relpath);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("emit_plot_script: cannot open " + path);
  file << body;
  if (!file) throw std::runtime_error("emit_plot_script: write failed for " + path);
}

}  // namespace rmimo
