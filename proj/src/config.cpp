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
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rmimo/experiments.hpp"

namespace rmimo {

namespace {

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r");
  auto end = text.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list element in \"" + text + "\"");
    parts.push_back(item);
  }
  return parts;
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key \"" + key + "\": cannot parse number \"" + text + "\"");
  }
}

std::int64_t parse_int(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::int64_t value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key \"" + key + "\": cannot parse integer \"" + text + "\"");
  }
}

std::uint64_t parse_uint(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size() || text[0] == '-') throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key \"" + key + "\": cannot parse unsigned integer \"" + text + "\"");
  }
}

// section -> (key -> value); insertion-checked so duplicate keys are errors
using Section = std::map<std::string, std::string>;

struct RawConfig {
  Section scenario;
  Section sweep;
  Section mc;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  Section* current = nullptr;
  std::string current_name;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "scenario") current = &raw.scenario;
      else if (name == "sweep") current = &raw.sweep;
      else if (name == "mc") current = &raw.mc;
      else throw ConfigError("unknown section [" + name + "]");
      current_name = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (current == nullptr)
      throw ConfigError("line " + std::to_string(line_no) + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    if (!current->emplace(key, value).second)
      throw ConfigError("duplicate key \"" + key + "\" in [" + current_name + "]");
  }
  return raw;
}

// take() consumes recognized keys; whatever remains afterwards is unknown
std::optional<std::string> take(Section& section, const std::string& key) {
  auto it = section.find(key);
  if (it == section.end()) return std::nullopt;
  std::string value = it->second;
  section.erase(it);
  return value;
}

void reject_leftovers(const Section& section, const std::string& name) {
  if (section.empty()) return;
  std::string keys;
  for (const auto& [key, value] : section) {
    if (!keys.empty()) keys += ", ";
    keys += key;
  }
  throw ConfigError("unknown key(s) in [" + name + "]: " + keys);
}

}  // namespace

void ExperimentConfig::validate() const {
  const int n = scenario.users;
  if (n < 1) throw ConfigError("[scenario] N must be >= 1");
  if (!(scenario.hole_radius_m > 0.0) || !(scenario.hole_radius_m < scenario.cell_radius_m))
    throw ConfigError("[scenario] need 0 < r_h_m < cell_radius_m");
  if (!(scenario.shadow_sigma_db >= 0.0)) throw ConfigError("[scenario] sigma_dB must be >= 0");
  if (!(scenario.pathloss_exponent > 0.0)) throw ConfigError("[scenario] v must be > 0");

  if (sweep.grid.empty()) throw ConfigError("[sweep] grid must be nonempty");
  for (std::size_t i = 1; i < sweep.grid.size(); ++i) {
    if (!(sweep.grid[i] > sweep.grid[i - 1]))
      throw ConfigError("[sweep] grid must be strictly increasing");
  }
  const bool fixed_power = sweep.p_u_db.has_value();
  const bool scaled_power = sweep.e_u_db.has_value();
  if (fixed_power == scaled_power)
    throw ConfigError("[sweep] exactly one of p_u_dB and E_u_dB must be set");

  const int tau_eff = sweep.tau > 0 ? sweep.tau : n;
  if (tau_eff < n) throw ConfigError("[sweep] tau must be >= N");
  if (tau_eff > sweep.coherence_symbols) throw ConfigError("[sweep] tau must be <= T");
  if (sweep.coherence_symbols < 1) throw ConfigError("[sweep] T must be >= 1");
  if (sweep.receivers.empty()) throw ConfigError("[sweep] receivers must be nonempty");
  if (sweep.csi_states.empty()) throw ConfigError("[sweep] csi must be nonempty");

  const bool wants_zf =
      std::find(sweep.receivers.begin(), sweep.receivers.end(), Receiver::Zf) !=
      sweep.receivers.end();

  switch (sweep.kind) {
    case SweepKind::AntennaSweep: {
      if (sweep.antennas != 0) throw ConfigError("[sweep] M is not a valid key for m_sweep");
      if (sweep.k_db.empty()) throw ConfigError("[sweep] m_sweep needs K_dB");
      for (double g : sweep.grid) {
        if (g < 1.0 || g != std::floor(g))
          throw ConfigError("[sweep] m_sweep grid entries must be positive integers");
        if (wants_zf && g <= n) throw ConfigError("[sweep] ZF rows need M > N");
      }
      if (scaled_power && !(sweep.alpha >= 0.0))
        throw ConfigError("[sweep] alpha must be >= 0");
      break;
    }
    case SweepKind::KFactorSweep: {
      if (!fixed_power) throw ConfigError("[sweep] k_sweep needs p_u_dB");
      if (!sweep.k_db.empty()) throw ConfigError("[sweep] k_sweep takes K values from grid");
      if (sweep.antennas < 1) throw ConfigError("[sweep] k_sweep needs M");
      if (wants_zf && sweep.antennas <= n) throw ConfigError("[sweep] ZF rows need M > N");
      break;
    }
    case SweepKind::AlphaSweep: {
      if (!scaled_power) throw ConfigError("[sweep] alpha_sweep needs E_u_dB");
      if (sweep.k_db.empty()) throw ConfigError("[sweep] alpha_sweep needs K_dB");
      if (sweep.antennas < 1) throw ConfigError("[sweep] alpha_sweep needs M");
      if (wants_zf && sweep.antennas <= n) throw ConfigError("[sweep] ZF rows need M > N");
      for (double g : sweep.grid) {
        if (!(g >= 0.0)) throw ConfigError("[sweep] alpha grid entries must be >= 0");
      }
      break;
    }
  }

  if (mc.trials < 100) throw ConfigError("[mc] trials must be >= 100");
  if (mc.workers < 1) throw ConfigError("[mc] workers must be >= 1");
}

ExperimentConfig parse_config(const std::string& text) {
  RawConfig raw = tokenize(text);
  ExperimentConfig config;

  if (auto v = take(raw.scenario, "cell_radius_m")) config.scenario.cell_radius_m = parse_double(*v, "cell_radius_m");
  if (auto v = take(raw.scenario, "r_h_m")) config.scenario.hole_radius_m = parse_double(*v, "r_h_m");
  if (auto v = take(raw.scenario, "v")) config.scenario.pathloss_exponent = parse_double(*v, "v");
  if (auto v = take(raw.scenario, "sigma_dB")) config.scenario.shadow_sigma_db = parse_double(*v, "sigma_dB");
  if (auto v = take(raw.scenario, "N")) config.scenario.users = static_cast<int>(parse_int(*v, "N"));
  if (auto v = take(raw.scenario, "drop_seed")) config.scenario.drop_seed = parse_uint(*v, "drop_seed");
  reject_leftovers(raw.scenario, "scenario");

  if (auto v = take(raw.sweep, "kind")) {
    if (*v == "m_sweep") config.sweep.kind = SweepKind::AntennaSweep;
    else if (*v == "k_sweep") config.sweep.kind = SweepKind::KFactorSweep;
    else if (*v == "alpha_sweep") config.sweep.kind = SweepKind::AlphaSweep;
    else throw ConfigError("kind must be m_sweep, k_sweep or alpha_sweep");
  }
  if (auto v = take(raw.sweep, "grid")) {
    config.sweep.grid.clear();
    for (const auto& item : split_list(*v)) config.sweep.grid.push_back(parse_double(item, "grid"));
  } else {
    throw ConfigError("[sweep] grid is required");
  }
  if (auto v = take(raw.sweep, "p_u_dB")) config.sweep.p_u_db = parse_double(*v, "p_u_dB");
  if (auto v = take(raw.sweep, "E_u_dB")) config.sweep.e_u_db = parse_double(*v, "E_u_dB");
  if (auto v = take(raw.sweep, "alpha")) config.sweep.alpha = parse_double(*v, "alpha");
  if (auto v = take(raw.sweep, "K_dB")) {
    config.sweep.k_db.clear();
    for (const auto& item : split_list(*v)) config.sweep.k_db.push_back(parse_double(item, "K_dB"));
  } else {
    config.sweep.k_db.clear();
  }
  if (auto v = take(raw.sweep, "M")) config.sweep.antennas = static_cast<int>(parse_int(*v, "M"));
  if (auto v = take(raw.sweep, "tau")) config.sweep.tau = static_cast<int>(parse_int(*v, "tau"));
  if (auto v = take(raw.sweep, "T")) config.sweep.coherence_symbols = static_cast<int>(parse_int(*v, "T"));
  if (auto v = take(raw.sweep, "receivers")) {
    config.sweep.receivers.clear();
    for (const auto& item : split_list(*v)) {
      if (item == "mrc") config.sweep.receivers.push_back(Receiver::Mrc);
      else if (item == "zf") config.sweep.receivers.push_back(Receiver::Zf);
      else throw ConfigError("receivers entries must be mrc or zf");
    }
  }
  if (auto v = take(raw.sweep, "csi")) {
    config.sweep.csi_states.clear();
    for (const auto& item : split_list(*v)) {
      if (item == "perfect") config.sweep.csi_states.push_back(Csi::Perfect);
      else if (item == "imperfect") config.sweep.csi_states.push_back(Csi::Imperfect);
      else throw ConfigError("csi entries must be perfect or imperfect");
    }
  }
  reject_leftovers(raw.sweep, "sweep");

  if (auto v = take(raw.mc, "trials")) config.mc.trials = parse_uint(*v, "trials");
  if (auto v = take(raw.mc, "master_seed")) config.mc.master_seed = parse_uint(*v, "master_seed");
  if (auto v = take(raw.mc, "workers")) config.mc.workers = static_cast<int>(parse_int(*v, "workers"));
  reject_leftovers(raw.mc, "mc");

  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace rmimo
