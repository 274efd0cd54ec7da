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

#include "lrmac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lrmac/baselines.hpp"
#include "lrmac/errors.hpp"
#include "lrmac/rate.hpp"

namespace lrmac {
namespace {

template <typename T>
std::vector<T> broadcast(const std::vector<T>& v, int users, const char* what) {
  if (v.empty() || static_cast<int>(v.size()) == users) return v;
  if (v.size() == 1) return std::vector<T>(users, v.front());
  throw DomainError(std::string(what) + " needs one entry or one per user");
}

double sum_dbm(double watts) {
  return watts > 0.0 ? watts_to_dbm(watts) : -std::numeric_limits<double>::infinity();
}

struct Cell {
  std::size_t point = 0;
  int trial = 0;
  Method method = Method::proposed;
};

ResultRow run_cell(const ExperimentSpec& spec, std::optional<double> value, int trial, Method method,
                   const RunOptions& opt) {
  ResultRow row;
  row.method = method;
  row.sweep_value = value.value_or(0.0);
  ScenarioConfig sc = spec.scenario_at(value);
  sc.seed = spec.scenario.seed + static_cast<std::uint64_t>(trial);
  row.seed = sc.seed;
  const int users = sc.num_users;
  try {
    const ChannelSet ch = generate_channels(sc);
    PowerAllocation alloc;
    RateMatrix rates;
    if (spec.mode == Mode::max_rate) {
      EnergyBudget budget;
      std::optional<double> snr = spec.snr_db;
      if (spec.sweep.variable == SweepVariable::snr) snr = value;
      if (snr) {
        budget.e_max = budgets_for_receive_snr(ch, *snr);
      } else {
        for (double p : broadcast(spec.tx_power_dbm, users, "tx_power_dbm")) budget.e_max.push_back(dbm_to_watts(p));
      }
      budget.rate_weights = broadcast(spec.rate_weights, users, "rate_weights");
      switch (method) {
        case Method::proposed: {
          auto r = max_rate_allocate(ch, budget, spec.solver);
          alloc = std::move(r.alloc);
          rates = std::move(r.rates);
          row.schedule = r.order.to_string();
          row.iterations = r.iterations;
          if (opt.keep_trace) row.trace = std::move(r.trace);
          break;
        }
        case Method::oma: {
          auto r = oma_allocate(ch, budget);
          alloc = std::move(r.alloc);
          rates = std::move(r.rates);
          row.schedule = "oma";
          break;
        }
        case Method::noma:
        case Method::mc_noma: {
          auto r = method == Method::noma ? noma_allocate(ch, budget) : mc_noma_allocate(ch, budget);
          alloc = std::move(r.alloc);
          rates = std::move(r.rates);
          row.schedule = r.order.to_string();
          break;
        }
      }
    } else {
      RateRequirement req;
      if (spec.b_min_mbps.empty()) {
        EnergyBudget ref;
        ref.e_max.assign(users, dbm_to_watts(spec.reference_power_dbm));
        req.b_min.resize(users);
        const auto oma = oma_allocate(ch, ref);
        const Eigen::VectorXd per_user = oma.rates.per_user();
        for (int u = 0; u < users; ++u) req.b_min[u] = per_user[u];
      } else {
        for (double m : broadcast(spec.b_min_mbps, users, "b_min_mbps"))
          req.b_min.push_back(mbps_to_bits(m, sc.bandwidth_hz, sc.num_subcarriers));
      }
      req.weights = broadcast(spec.energy_weights, users, "energy_weights");
      if (method == Method::proposed) {
        auto r = min_energy_allocate(ch, req, spec.solver);
        alloc = std::move(r.alloc);
        rates = std::move(r.rates);
        row.schedule = r.schedule.summary();
        row.iterations = r.iterations;
        if (opt.keep_trace) row.trace = std::move(r.trace);
      } else if (method == Method::oma) {
        auto r = oma_allocate(ch, req);
        alloc = std::move(r.alloc);
        rates = std::move(r.rates);
        row.schedule = "oma";
      } else {
        throw DomainError("min_energy mode supports only the proposed and oma methods");
      }
    }
    row.rates_mbps = throughput_mbps(rates, sc.bandwidth_hz, sc.num_subcarriers);
    double total = 0.0;
    for (int u = 0; u < users; ++u) {
      const double p = alloc.e.row(u).sum();
      total += p;
      row.power_dbm.push_back(sum_dbm(p));
      row.sum_rate_mbps += row.rates_mbps[u];
    }
    row.total_power_dbm = sum_dbm(total);
    if (opt.keep_alloc) row.alloc = std::move(alloc);
  } catch (const std::exception& ex) {
    row.ok = false;
    row.error = ex.what();
    row.rates_mbps.assign(users, std::numeric_limits<double>::quiet_NaN());
    row.power_dbm.assign(users, std::numeric_limits<double>::quiet_NaN());
    row.sum_rate_mbps = std::numeric_limits<double>::quiet_NaN();
    row.total_power_dbm = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::min_energy ? "min_energy" : "max_rate"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::proposed: return "proposed";
    case Method::oma: return "oma";
    case Method::noma: return "noma";
    case Method::mc_noma: return "mc_noma";
  }
  return "unknown";
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::none: return "none";
    case SweepVariable::snr: return "snr";
    case SweepVariable::ap_antennas: return "ap_antennas";
    case SweepVariable::num_users: return "num_users";
    case SweepVariable::num_subcarriers: return "num_subcarriers";
  }
  return "unknown";
}

Mode parse_mode(const std::string& s) {
  if (s == "min_energy") return Mode::min_energy;
  if (s == "max_rate") return Mode::max_rate;
  throw DomainError("unknown mode '" + s + "'");
}

Method parse_method(const std::string& s) {
  for (Method m : {Method::proposed, Method::oma, Method::noma, Method::mc_noma})
    if (to_string(m) == s) return m;
  throw DomainError("unknown method '" + s + "'");
}

SweepVariable parse_sweep_variable(const std::string& s) {
  for (SweepVariable v : {SweepVariable::none, SweepVariable::snr, SweepVariable::ap_antennas,
                          SweepVariable::num_users, SweepVariable::num_subcarriers})
    if (to_string(v) == s) return v;
  throw DomainError("unknown sweep variable '" + s + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (methods.empty()) throw DomainError("no methods requested");
  solver.validate();
  if (sweep.variable != SweepVariable::none) {
    if (sweep.values.empty()) throw DomainError("sweep needs at least one value");
    for (double v : sweep.values) {
      if (sweep.variable == SweepVariable::snr) {
        if (!std::isfinite(v)) throw DomainError("snr sweep values must be finite");
      } else if (!(v > 0.0) || v != std::floor(v)) {
        throw DomainError("sweep values must be positive integers");
      }
    }
  }
  if (mode == Mode::min_energy)
    for (Method m : methods)
      if (m != Method::proposed && m != Method::oma)
        throw DomainError("min_energy mode supports only the proposed and oma methods");
  const auto points = sweep.variable == SweepVariable::none ? std::vector<double>{} : sweep.values;
  if (points.empty()) {
    scenario_at(std::nullopt).validate();
  } else {
    for (double v : points) scenario_at(v).validate();
  }
}

ScenarioConfig ExperimentSpec::scenario_at(std::optional<double> value) const {
  ScenarioConfig sc = scenario;
  if (value) {
    const int iv = static_cast<int>(std::lround(*value));
    switch (sweep.variable) {
      case SweepVariable::ap_antennas: sc.ap_antennas = iv; break;
      case SweepVariable::num_users: sc.num_users = iv; break;
      case SweepVariable::num_subcarriers: sc.num_subcarriers = iv; break;
      default: break;
    }
  }
  auto fit = [&](auto& v) {
    if (!v.empty() && static_cast<int>(v.size()) != sc.num_users && sweep.variable == SweepVariable::num_users)
      v.resize(sc.num_users, v.back());
  };
  fit(sc.distances_m);
  fit(sc.antennas_per_user);
  return sc;
}

int ResultsTable::max_users() const {
  std::size_t u = 0;
  for (const auto& r : rows) u = std::max(u, r.rates_mbps.size());
  return static_cast<int>(u);
}

bool ResultsTable::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.ok; });
}

std::vector<double> budgets_for_receive_snr(const ChannelSet& ch, double snr_db) {
  ch.validate();
  const double snr = std::pow(10.0, snr_db / 10.0);
  const int n = ch.num_subcarriers();
  std::vector<double> out(ch.num_users(), 0.0);
  for (int u = 0; u < ch.num_users(); ++u) {
    double gain = 0.0;
    for (const auto& h : ch.H[u]) gain += h.squaredNorm();
    // Mean received energy per AP antenna and subcarrier over the noise.
    const double per_antenna = gain / (static_cast<double>(n) * ch.ap_antennas() * ch.user_antennas(u));
    if (per_antenna > 0.0) out[u] = snr * ch.noise_variance * n / per_antenna;
  }
  return out;
}

ResultsTable run_experiment(const ExperimentSpec& spec, const RunOptions& opt) {
  spec.validate();
  ResultsTable table;
  table.sweep_variable = spec.sweep.variable;
  table.reference_power_dbm = spec.reference_power_dbm;
  std::ostringstream meta;
  meta << "mode=" << to_string(spec.mode) << "; sweep=" << to_string(spec.sweep.variable)
       << "; trials=" << spec.trials << "; base_seed=" << spec.scenario.seed;
  if (spec.mode == Mode::max_rate && (spec.snr_db || spec.sweep.variable == SweepVariable::snr))
    meta << "; snr=mean per-antenna receive SNR per subcarrier (per-user budgets scaled to match)";
  meta << "; power_rel_db=power_dbm minus " << format_value(spec.reference_power_dbm) << " dBm";
  table.metadata = meta.str();

  std::vector<std::optional<double>> points;
  if (spec.sweep.variable == SweepVariable::none) {
    points.push_back(std::nullopt);
  } else {
    for (double v : spec.sweep.values) points.emplace_back(v);
  }
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (int t = 0; t < spec.trials; ++t)
      for (Method m : spec.methods) cells.push_back({p, t, m});
  table.rows.resize(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      table.rows[i] = run_cell(spec, points[cells[i].point], cells[i].trial, cells[i].method, opt);
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(cells.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return table;
}

CandidateRates timeshare_demo_candidates() {
  CandidateRates c;
  c.orders = {DecodingOrder({0, 1, 2}), DecodingOrder({1, 2, 0}), DecodingOrder({2, 0, 1})};
  c.s.resize(3, 3);
  c.s << 398.01, 470.48, 632.23,  //
      691.78, 242.32, 565.91,     //
      565.91, 691.78, 242.32;
  return c;
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void emit_csv(const ResultsTable& table, std::ostream& os) {
  const int users = table.max_users();
  if (!table.metadata.empty()) os << "# " << csv_safe(table.metadata) << '\n';
  os << "method,sweep_value,seed";
  for (int u = 1; u <= users; ++u) os << ",rate_mbps_user" << u;
  for (int u = 1; u <= users; ++u) os << ",power_dbm_user" << u;
  os << ",sum_rate_mbps,total_power_dbm,schedule";
  for (int u = 1; u <= users; ++u) os << ",power_rel_db_user" << u;
  os << ",status,iterations\n";
  for (const auto& r : table.rows) {
    const int n = static_cast<int>(r.rates_mbps.size());
    os << to_string(r.method) << ',' << format_value(r.sweep_value) << ',' << r.seed;
    for (int u = 0; u < users; ++u) os << ',' << (u < n ? format_value(r.rates_mbps[u]) : "");
    for (int u = 0; u < users; ++u) os << ',' << (u < n ? format_value(r.power_dbm[u]) : "");
    os << ',' << format_value(r.sum_rate_mbps) << ',' << format_value(r.total_power_dbm) << ','
       << csv_safe(r.schedule);
    for (int u = 0; u < users; ++u)
      os << ',' << (u < n ? format_value(r.power_dbm[u] - table.reference_power_dbm) : "");
    os << ',' << (r.ok ? "ok" : "failed: " + csv_safe(r.error)) << ',' << r.iterations << '\n';
  }
}

void emit_csv(const ResultsTable& table, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(table, os);
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

void emit_alloc_csv(const ResultsTable& table, std::ostream& os) {
  os << "method,sweep_value,seed,user,subcarrier,energy_w\n";
  os.precision(17);
  for (const auto& r : table.rows)
    for (Eigen::Index u = 0; u < r.alloc.e.rows(); ++u)
      for (Eigen::Index n = 0; n < r.alloc.e.cols(); ++n)
        os << to_string(r.method) << ',' << format_value(r.sweep_value) << ',' << r.seed << ',' << u + 1 << ','
           << n << ',' << r.alloc.e(u, n) << '\n';
}

void emit_trace_csv(const ResultsTable& table, std::ostream& os) {
  os << "method,sweep_value,seed,iteration,phase,dual_value,best_dual,max_rate_residual\n";
  os.precision(10);
  for (const auto& r : table.rows)
    for (const auto& t : r.trace)
      os << to_string(r.method) << ',' << format_value(r.sweep_value) << ',' << r.seed << ',' << t.iteration << ','
         << t.phase << ',' << t.dual_value << ',' << t.best_dual << ',' << t.max_rate_residual << '\n';
}

}  // namespace lrmac
