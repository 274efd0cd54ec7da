// Copyright 2026 The lrmac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lrmac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lrmac/errors.hpp"

namespace lrmac {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw DomainError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw DomainError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw DomainError(std::string("bad value for '") + key + "': " + ex.what());
  }
}

// Accepts a scalar as shorthand for a one-element list.
void read_list(const json& j, const char* key, std::vector<double>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_number()) {
    out = {j.at(key).get<double>()};
    return;
  }
  read(j, key, out);
}

ScenarioConfig scenario_from(const json& j) {
  reject_unknown(j,
                 {"num_users", "antennas_per_user", "ap_antennas", "num_subcarriers", "bandwidth_hz",
                  "center_freq_hz", "distances_m", "noise_psd_dbm_per_hz", "seed"},
                 "scenario");
  ScenarioConfig c;
  read(j, "num_users", c.num_users);
  read(j, "antennas_per_user", c.antennas_per_user);
  read(j, "ap_antennas", c.ap_antennas);
  read(j, "num_subcarriers", c.num_subcarriers);
  read(j, "bandwidth_hz", c.bandwidth_hz);
  read(j, "center_freq_hz", c.center_freq_hz);
  read_list(j, "distances_m", c.distances_m);
  read(j, "noise_psd_dbm_per_hz", c.noise_psd_dbm_per_hz);
  read(j, "seed", c.seed);
  return c;
}

SolverOptions solver_from(const json& j) {
  reject_unknown(j,
                 {"rate_tol", "inner_tol", "max_outer_iters", "step_scale", "energy_cap", "eps_theta", "max_orders",
                  "warm_start_iters"},
                 "solver");
  SolverOptions o;
  read(j, "rate_tol", o.rate_tol);
  read(j, "inner_tol", o.inner_tol);
  read(j, "max_outer_iters", o.max_outer_iters);
  read(j, "step_scale", o.step_scale);
  read(j, "energy_cap", o.energy_cap);
  read(j, "eps_theta", o.eps_theta);
  read(j, "max_orders", o.max_orders);
  read(j, "warm_start_iters", o.warm_start_iters);
  return o;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& ex) {
    throw DomainError(std::string("config is not valid JSON: ") + ex.what());
  }
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& json_text) { return scenario_from(parse(json_text)); }

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  const json j = parse(json_text);
  reject_unknown(j,
                 {"scenario", "mode", "snr_db", "tx_power_dbm", "rate_weights", "b_min_mbps", "energy_weights",
                  "reference_power_dbm", "sweep", "methods", "trials", "solver"},
                 "experiment");
  ExperimentSpec s;
  if (j.contains("scenario")) s.scenario = scenario_from(j.at("scenario"));
  if (j.contains("solver")) s.solver = solver_from(j.at("solver"));
  if (j.contains("mode")) s.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("snr_db") && !j.at("snr_db").is_null()) s.snr_db = j.at("snr_db").get<double>();
  read_list(j, "tx_power_dbm", s.tx_power_dbm);
  read_list(j, "rate_weights", s.rate_weights);
  read_list(j, "b_min_mbps", s.b_min_mbps);
  read_list(j, "energy_weights", s.energy_weights);
  read(j, "reference_power_dbm", s.reference_power_dbm);
  read(j, "trials", s.trials);
  if (j.contains("methods")) {
    s.methods.clear();
    for (const auto& m : j.at("methods")) s.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    reject_unknown(sw, {"variable", "values"}, "sweep");
    if (sw.contains("variable")) s.sweep.variable = parse_sweep_variable(sw.at("variable").get<std::string>());
    read(sw, "values", s.sweep.values);
  }
  return s;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_spec(ss.str());
}

std::string to_json(const ExperimentSpec& s) {
  json sc = {{"num_users", s.scenario.num_users},
             {"antennas_per_user", s.scenario.antennas_per_user},
             {"ap_antennas", s.scenario.ap_antennas},
             {"num_subcarriers", s.scenario.num_subcarriers},
             {"bandwidth_hz", s.scenario.bandwidth_hz},
             {"center_freq_hz", s.scenario.center_freq_hz},
             {"distances_m", s.scenario.distances_m},
             {"noise_psd_dbm_per_hz", s.scenario.noise_psd_dbm_per_hz},
             {"seed", s.scenario.seed}};
  json so = {{"rate_tol", s.solver.rate_tol},
             {"inner_tol", s.solver.inner_tol},
             {"max_outer_iters", s.solver.max_outer_iters},
             {"step_scale", s.solver.step_scale},
             {"energy_cap", s.solver.energy_cap},
             {"eps_theta", s.solver.eps_theta},
             {"max_orders", s.solver.max_orders},
             {"warm_start_iters", s.solver.warm_start_iters}};
  json methods = json::array();
  for (Method m : s.methods) methods.push_back(to_string(m));
  json out = {{"scenario", sc},
              {"mode", to_string(s.mode)},
              {"tx_power_dbm", s.tx_power_dbm},
              {"rate_weights", s.rate_weights},
              {"b_min_mbps", s.b_min_mbps},
              {"energy_weights", s.energy_weights},
              {"reference_power_dbm", s.reference_power_dbm},
              {"sweep", {{"variable", to_string(s.sweep.variable)}, {"values", s.sweep.values}}},
              {"methods", methods},
              {"trials", s.trials},
              {"solver", so}};
  out["snr_db"] = s.snr_db ? json(*s.snr_db) : json(nullptr);
  return out.dump(2);
}

}  // namespace lrmac
