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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrmac/channel.hpp"
#include "lrmac/solver.hpp"
#include "lrmac/timeshare.hpp"

namespace lrmac {

enum class Mode { min_energy, max_rate };
enum class Method { proposed, oma, noma, mc_noma };
enum class SweepVariable { none, snr, ap_antennas, num_users, num_subcarriers };

std::string to_string(Mode m);
std::string to_string(Method m);
std::string to_string(SweepVariable v);
Mode parse_mode(const std::string& s);
Method parse_method(const std::string& s);
SweepVariable parse_sweep_variable(const std::string& s);

struct SweepSpec {
  SweepVariable variable = SweepVariable::none;
  std::vector<double> values;
};

struct ExperimentSpec {
  ScenarioConfig scenario;
  Mode mode = Mode::max_rate;

  // max_rate budgets. When snr_db is set (or the sweep runs over snr) each
  // user's budget is chosen so its mean per-antenna receive SNR equals it;
  // otherwise tx_power_dbm applies (one entry, or one per user).
  std::optional<double> snr_db;
  std::vector<double> tx_power_dbm{15.0};
  std::vector<double> rate_weights;

  // min_energy targets in Mbps (one entry, or one per user). Empty means
  // "match OMA at reference_power_dbm per user".
  std::vector<double> b_min_mbps;
  std::vector<double> energy_weights;

  double reference_power_dbm = 15.0;
  SweepSpec sweep;
  std::vector<Method> methods{Method::proposed, Method::oma, Method::noma, Method::mc_noma};
  int trials = 1;
  SolverOptions solver;

  void validate() const;
  // Scenario for one sweep point with per-user lists broadcast to U.
  ScenarioConfig scenario_at(std::optional<double> sweep_value) const;
};

struct ResultRow {
  Method method = Method::proposed;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> rates_mbps;
  std::vector<double> power_dbm;
  double sum_rate_mbps = 0.0;
  double total_power_dbm = 0.0;
  std::string schedule;
  bool ok = true;
  std::string error;
  int iterations = 0;
  PowerAllocation alloc;
  std::vector<TraceRow> trace;
};

struct ResultsTable {
  SweepVariable sweep_variable = SweepVariable::none;
  double reference_power_dbm = 15.0;
  std::string metadata;  // written as a leading comment line when non-empty
  std::vector<ResultRow> rows;

  int max_users() const;
  bool all_ok() const;
};

struct RunOptions {
  int jobs = 1;
  bool keep_alloc = false;
  bool keep_trace = false;
};

// Per-user energy budget giving the requested mean per-antenna receive SNR.
std::vector<double> budgets_for_receive_snr(const ChannelSet& ch, double snr_db);

ResultsTable run_experiment(const ExperimentSpec& spec, const RunOptions& opt = {});

void emit_csv(const ResultsTable& table, std::ostream& os);
void emit_csv(const ResultsTable& table, const std::string& path);
void emit_alloc_csv(const ResultsTable& table, std::ostream& os);
void emit_trace_csv(const ResultsTable& table, std::ostream& os);

// Three measured candidate rate rows (Mbps) for a 3-user, 2-antenna AP at
// 3 m, each a single SIC order; mixing them hits 500 Mbps per user.
CandidateRates timeshare_demo_candidates();

// Formats with 6 significant digits; non-finite values as inf/-inf/nan.
std::string format_value(double v);

}  // namespace lrmac
