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

// Command line front end: run experiments, replay the time-sharing example,
// or run the invariant suite.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrmac/config.hpp"
#include "lrmac/errors.hpp"
#include "lrmac/harness.hpp"
#include "lrmac/timeshare.hpp"
#include "lrmac/verify.hpp"

namespace {

struct Overrides {
  std::optional<int> num_users, ap_antennas, num_subcarriers, trials, max_outer_iters, max_orders, warm_start_iters;
  std::optional<std::vector<int>> antennas_per_user;
  std::optional<double> bandwidth_hz, center_freq_hz, noise_psd, snr_db, reference_power_dbm;
  std::optional<double> rate_tol, inner_tol, step_scale, energy_cap, eps_theta;
  std::optional<std::vector<double>> distances_m, tx_power_dbm, b_min_mbps, rate_weights, energy_weights, sweep_values;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode, sweep_variable;
  std::optional<std::vector<std::string>> methods;
};

template <typename T, typename U>
void apply(const std::optional<T>& from, U& to) {
  if (from) to = *from;
}

void apply_overrides(const Overrides& o, lrmac::ExperimentSpec& s) {
  apply(o.num_users, s.scenario.num_users);
  apply(o.antennas_per_user, s.scenario.antennas_per_user);
  apply(o.ap_antennas, s.scenario.ap_antennas);
  apply(o.num_subcarriers, s.scenario.num_subcarriers);
  apply(o.bandwidth_hz, s.scenario.bandwidth_hz);
  apply(o.center_freq_hz, s.scenario.center_freq_hz);
  apply(o.distances_m, s.scenario.distances_m);
  apply(o.noise_psd, s.scenario.noise_psd_dbm_per_hz);
  apply(o.seed, s.scenario.seed);
  if (o.mode) s.mode = lrmac::parse_mode(*o.mode);
  if (o.snr_db) s.snr_db = *o.snr_db;
  apply(o.tx_power_dbm, s.tx_power_dbm);
  apply(o.b_min_mbps, s.b_min_mbps);
  apply(o.rate_weights, s.rate_weights);
  apply(o.energy_weights, s.energy_weights);
  apply(o.reference_power_dbm, s.reference_power_dbm);
  apply(o.trials, s.trials);
  if (o.methods) {
    s.methods.clear();
    for (const auto& m : *o.methods) s.methods.push_back(lrmac::parse_method(m));
  }
  if (o.sweep_variable) s.sweep.variable = lrmac::parse_sweep_variable(*o.sweep_variable);
  apply(o.sweep_values, s.sweep.values);
  apply(o.rate_tol, s.solver.rate_tol);
  apply(o.inner_tol, s.solver.inner_tol);
  apply(o.max_outer_iters, s.solver.max_outer_iters);
  apply(o.step_scale, s.solver.step_scale);
  apply(o.energy_cap, s.solver.energy_cap);
  apply(o.eps_theta, s.solver.eps_theta);
  apply(o.max_orders, s.solver.max_orders);
  apply(o.warm_start_iters, s.solver.warm_start_iters);
}

template <typename T>
void opt(CLI::App* app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

void write_file(const std::string& path, const std::string& what,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + what + " file '" + path + "'");
  body(os);
}

int run_command(const std::string& config, const Overrides& o, const std::string& out, const std::string& alloc,
                const std::string& trace, int jobs) {
  lrmac::ExperimentSpec spec = config.empty() ? lrmac::ExperimentSpec{} : lrmac::load_experiment_spec(config);
  apply_overrides(o, spec);
  lrmac::RunOptions ro;
  ro.jobs = jobs;
  ro.keep_alloc = !alloc.empty();
  ro.keep_trace = !trace.empty();
  const auto table = lrmac::run_experiment(spec, ro);
  if (out.empty() || out == "-") {
    lrmac::emit_csv(table, std::cout);
  } else {
    lrmac::emit_csv(table, out);
  }
  if (!alloc.empty()) write_file(alloc, "allocation", [&](std::ostream& os) { lrmac::emit_alloc_csv(table, os); });
  if (!trace.empty()) write_file(trace, "trace", [&](std::ostream& os) { lrmac::emit_trace_csv(table, os); });
  int failed = 0;
  for (const auto& r : table.rows)
    if (!r.ok) {
      ++failed;
      std::cerr << "row failed: " << lrmac::to_string(r.method) << " seed " << r.seed << ": " << r.error << '\n';
    }
  return failed == 0 ? 0 : 1;
}

int timeshare_demo(double tol) {
  const auto cand = lrmac::timeshare_demo_candidates();
  const std::vector<double> target(3, 500.0);
  const auto schedule = lrmac::solve_timeshare(cand, target, tol);
  std::cout << "order,weight,rate_user1_mbps,rate_user2_mbps,rate_user3_mbps\n";
  for (const auto& e : schedule.entries) {
    std::cout << e.order.to_string() << ',' << lrmac::format_value(e.weight);
    for (Eigen::Index u = 0; u < e.rates.size(); ++u) std::cout << ',' << lrmac::format_value(e.rates[u]);
    std::cout << '\n';
  }
  const Eigen::VectorXd avg = schedule.averaged_rates();
  std::cout << "average";
  std::cout << ',' << lrmac::format_value(schedule.weight_sum());
  for (Eigen::Index u = 0; u < avg.size(); ++u) std::cout << ',' << lrmac::format_value(avg[u]);
  std::cout << '\n';
  return 0;
}

int verify_command(int seeds, std::uint64_t seed) {
  const auto checks = lrmac::run_invariant_suite(seeds, seed);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank multi-carrier uplink MAC allocator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment and write a results CSV");
  std::string config, out, alloc, trace;
  int jobs = 1;
  Overrides o;
  run->add_option("--config", config, "JSON experiment config")->check(CLI::ExistingFile);
  run->add_option("--out", out, "results CSV path (default stdout)");
  run->add_option("--dump-alloc", alloc, "companion CSV with every allocation");
  run->add_option("--trace", trace, "per-iteration solver trace CSV");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  opt(run, "--num-users", o.num_users, "number of users");
  opt(run, "--antennas-per-user", o.antennas_per_user, "antennas per user");
  opt(run, "--ap-antennas", o.ap_antennas, "AP antennas");
  opt(run, "--num-subcarriers", o.num_subcarriers, "subcarriers");
  opt(run, "--bandwidth-hz", o.bandwidth_hz, "bandwidth in Hz");
  opt(run, "--center-freq-hz", o.center_freq_hz, "carrier frequency in Hz");
  opt(run, "--distances-m", o.distances_m, "user distances in m");
  opt(run, "--noise-psd-dbm-per-hz", o.noise_psd, "noise PSD in dBm/Hz");
  opt(run, "--seed", o.seed, "base seed");
  opt(run, "--mode", o.mode, "min_energy or max_rate");
  opt(run, "--snr-db", o.snr_db, "mean per-antenna receive SNR in dB");
  opt(run, "--tx-power-dbm", o.tx_power_dbm, "per-user transmit budget in dBm");
  opt(run, "--b-min-mbps", o.b_min_mbps, "per-user rate targets in Mbps");
  opt(run, "--rate-weights", o.rate_weights, "per-user rate weights");
  opt(run, "--energy-weights", o.energy_weights, "per-user energy weights");
  opt(run, "--reference-power-dbm", o.reference_power_dbm, "reference for the relative power column");
  opt(run, "--methods", o.methods, "proposed, oma, noma, mc_noma");
  opt(run, "--trials", o.trials, "seeds per sweep point");
  opt(run, "--sweep-variable", o.sweep_variable, "snr, ap_antennas, num_users or num_subcarriers");
  opt(run, "--sweep-values", o.sweep_values, "sweep values");
  opt(run, "--rate-tol", o.rate_tol, "relative rate tolerance");
  opt(run, "--inner-tol", o.inner_tol, "inner solver tolerance");
  opt(run, "--max-outer-iters", o.max_outer_iters, "outer iteration limit");
  opt(run, "--step-scale", o.step_scale, "subgradient step scale");
  opt(run, "--energy-cap", o.energy_cap, "divergence guard");
  opt(run, "--eps-theta", o.eps_theta, "relative tie tolerance on theta");
  opt(run, "--max-orders", o.max_orders, "cap on enumerated decoding orders");
  opt(run, "--warm-start-iters", o.warm_start_iters, "subgradient iterations before refinement");

  auto* demo = app.add_subcommand("timeshare-demo", "solve the built-in time-sharing example");
  double demo_tol = 1e-3;
  demo->add_option("--tol", demo_tol, "relative rate tolerance");

  auto* verify = app.add_subcommand("verify", "run the invariant suite on random seeds");
  int seeds = 10;
  std::uint64_t verify_seed = 1;
  verify->add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "first seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return run_command(config, o, out, alloc, trace, jobs);
    if (*demo) return timeshare_demo(demo_tol);
    if (*verify) return verify_command(seeds, verify_seed);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
