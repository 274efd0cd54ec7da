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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lrmac/baselines.hpp"
#include "lrmac/channel.hpp"
#include "lrmac/errors.hpp"
#include "lrmac/harness.hpp"
#include "lrmac/rate.hpp"
#include "lrmac/solver.hpp"
#include "lrmac/timeshare.hpp"
#include "lrmac/verify.hpp"
#include "oracles.hpp"

namespace {

using namespace lrmac;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every min_energy_allocate result produced anywhere in this run.
std::vector<MinEnergyResult> g_min_energy_runs;

const MinEnergyResult& keep(MinEnergyResult r) {
  g_min_energy_runs.push_back(std::move(r));
  return g_min_energy_runs.back();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome three_order_example() {
  const auto cand = timeshare_demo_candidates();
  const std::vector<double> target(3, 500.0);
  const auto s = solve_timeshare(cand, target, 1e-3);
  const double expect[3] = {0.52, 0.17, 0.31};
  bool ok = s.entries.size() == 3;
  double werr = 0.0, rerr = 0.0;
  for (std::size_t i = 0; ok && i < 3; ++i) werr = std::max(werr, std::abs(s.entries[i].weight - expect[i]));
  const Eigen::VectorXd avg = s.averaged_rates();
  for (Eigen::Index u = 0; u < avg.size(); ++u) rerr = std::max(rerr, std::abs(avg[u] - 500.0));
  ok = ok && werr <= 0.01 && rerr <= 0.5;
  return {ok, "schedule " + s.summary() + ", max weight error " + fmt("%.4f", werr) + ", max rate error " +
                  fmt("%.3f", rerr) + " Mbps"};
}

Outcome telescoping() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> users(1, 5), ants(1, 4), sc(1, 16);
  std::uniform_real_distribution<double> energy(0.0, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int u_count = users(rng), ly = ants(rng), n_sc = sc(rng);
    const auto ch = testing::random_channels(rng, u_count, ly, n_sc, 0.5);
    PowerAllocation a(u_count, n_sc);
    for (int u = 0; u < u_count; ++u)
      for (int n = 0; n < n_sc; ++n) a.e(u, n) = energy(rng);
    std::vector<int> seq(u_count);
    std::iota(seq.begin(), seq.end(), 0);
    std::shuffle(seq.begin(), seq.end(), rng);
    const double sum = sic_rates(ch, a, DecodingOrder(seq)).sum();
    double full = 0.0;
    for (int n = 0; n < n_sc; ++n) full += testing::lu_subset_rate(ch, a, n, seq);
    worst = std::max(worst, std::abs(sum - full) / std::max(1.0, std::abs(full)));
  }
  return {worst <= 1e-9, "1000 instances, worst relative gap " + fmt("%.2e", worst)};
}

Outcome grid_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> tgt(1.0, 6.0), wt(0.5, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto ch = testing::random_channels(rng, 2, 1, 4);
    const RateRequirement req{{tgt(rng), tgt(rng)}, {wt(rng), wt(rng)}};
    const auto& r = keep(min_energy_allocate(ch, req));
    std::vector<double> g1, g2;
    for (int n = 0; n < 4; ++n) {
      g1.push_back(ch.H[0][n].squaredNorm());
      g2.push_back(ch.H[1][n].squaredNorm());
    }
    const double oracle =
        testing::two_user_min_energy_oracle(g1, g2, req.b_min[0], req.b_min[1], req.weights[0], req.weights[1]);
    worst = std::max(worst, std::abs(r.objective - oracle) / oracle);
  }
  return {worst <= 0.02, "25 instances, worst relative gap " + fmt("%.2e", worst)};
}

ChannelSet scenario_channels(std::uint64_t seed, int n_sc, std::vector<double> d) {
  ScenarioConfig cfg;
  cfg.num_subcarriers = n_sc;
  cfg.distances_m = std::move(d);
  cfg.seed = seed;
  return generate_channels(cfg);
}

Outcome round_trip() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(1.0, 10.0), frac(0.5, 1.5);
  double worst = 0.0;
  int ties = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto ch = scenario_channels(100 + trial, 16, {dist(rng), dist(rng), dist(rng)});
    // Targets around what OMA reaches at 10 dBm.
    const auto oma = oma_allocate(ch, EnergyBudget{std::vector<double>(3, dbm_to_watts(10.0)), {}});
    RateRequirement req;
    const Eigen::VectorXd base = oma.rates.per_user();
    for (int u = 0; u < 3; ++u) req.b_min.push_back(base[u] * frac(rng));
    const auto& me = keep(min_energy_allocate(ch, req));
    EnergyBudget budget;
    const Eigen::VectorXd used = me.alloc.per_user();
    budget.e_max.assign(used.data(), used.data() + used.size());
    budget.rate_weights = me.cert.theta;
    const auto mr = max_rate_allocate(ch, budget);
    // Tied multipliers leave the order open; read the rates under the
    // min-energy schedule.
    if (me.schedule.entries.size() > 1) ++ties;
    const Eigen::VectorXd got = time_shared_rates(ch, mr.alloc, me.schedule).per_user();
    for (int u = 0; u < 3; ++u) worst = std::max(worst, std::abs(got[u] - req.b_min[u]) / req.b_min[u]);
  }
  return {worst <= 0.01, "25 instances (" + std::to_string(ties) + " time-shared), worst relative rate error " +
                             fmt("%.2e", worst)};
}

Outcome polymatroid() {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> users(2, 10), ants(1, 4), sc(2, 6);
  std::uniform_real_distribution<double> frac(0.5, 2.0), wt(0.5, 2.0), cap(0.5, 5.0);
  double worst = -1.0;
  int outputs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int u_count = users(rng), ly = ants(rng), n_sc = sc(rng);
    const auto ch = testing::random_channels(rng, u_count, ly, n_sc);
    RateRequirement req;
    EnergyBudget budget;
    const double share = std::min(1.0, static_cast<double>(ly) / u_count);
    for (int u = 0; u < u_count; ++u) {
      req.b_min.push_back(n_sc * share * frac(rng));
      req.weights.push_back(wt(rng));
      budget.e_max.push_back(cap(rng));
      budget.rate_weights.push_back(wt(rng));
    }
    const auto& me = keep(min_energy_allocate(ch, req));
    worst = std::max(worst, polymatroid_violation(ch, me.alloc, me.rates.per_user()));
    const auto mr = max_rate_allocate(ch, budget);
    worst = std::max(worst, polymatroid_violation(ch, mr.alloc, mr.rates.per_user()));
    outputs += 2;
  }
  return {worst <= 1e-9, std::to_string(outputs) + " solver outputs, worst violation " + fmt("%.2e", worst) + " bits"};
}

Outcome dominance() {
  const int seeds = 100;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> dist(1.0, 10.0);
  double mean[4] = {0, 0, 0, 0};
  int strict = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto ch = scenario_channels(1000 + s, 64, {dist(rng), dist(rng), dist(rng)});
    EnergyBudget budget;
    budget.e_max = budgets_for_receive_snr(ch, 0.0);
    const double sums[4] = {max_rate_allocate(ch, budget).rates.sum(), mc_noma_allocate(ch, budget).rates.sum(),
                            noma_rates(ch, budget).sum(), oma_allocate(ch, budget).rates.sum()};
    for (int i = 0; i < 4; ++i) mean[i] += throughput_mbps(RateMatrix(Eigen::MatrixXd::Constant(1, 1, sums[i])),
                                                            80e6, 64)[0] / seeds;
    if (sums[0] > sums[3]) ++strict;
  }
  const bool ordered = mean[0] > mean[1] && mean[1] > mean[2] && mean[2] > mean[3];
  const bool ok = ordered && strict >= 95;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "mean sum rate proposed %.1f > mc_noma %.1f > noma %.1f > oma %.1f Mbps; proposed above oma on %d/%d",
                mean[0], mean[1], mean[2], mean[3], strict, seeds);
  return {ok, buf};
}

Outcome power_parity() {
  const int seeds = 20;
  int lower = 0;
  double saving_db = 0.0, saving_pct = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto ch = scenario_channels(1 + s, 64, {3.0, 3.0, 3.0});
    const auto oma = oma_allocate(ch, EnergyBudget{std::vector<double>(3, dbm_to_watts(15.0)), {}});
    RateRequirement req;
    const Eigen::VectorXd target = oma.rates.per_user();
    req.b_min.assign(target.data(), target.data() + target.size());
    const auto& r = keep(min_energy_allocate(ch, req));
    const double p_oma = oma.alloc.total(), p_prop = r.alloc.total();
    if (p_prop < p_oma) ++lower;
    saving_db += 10.0 * std::log10(p_oma / p_prop) / seeds;
    saving_pct += 100.0 * (1.0 - p_prop / p_oma) / seeds;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "lower total power on %d/%d seeds; mean saving %.2f dB (%.2f%%)", lower, seeds,
                saving_db, saving_pct);
  return {lower == seeds, buf};
}

Outcome time_sharing_necessity() {
  const auto ch = testing::mercedes_channels(4);
  const RateRequirement req{{6.0, 6.0, 6.0}, {}};
  const double tol = SolverOptions{}.rate_tol;
  const auto& r = keep(min_energy_allocate(ch, req));
  const auto orders = enumerate_orders(r.clusters);
  const auto cand = rates_per_order(ch, r.alloc, orders);
  bool single_fails = true;
  int refused = 0;
  for (Eigen::Index i = 0; i < cand.s.rows(); ++i) {
    for (int u = 0; u < 3; ++u)
      if (std::abs(cand.s(i, u) - req.b_min[u]) <= tol * req.b_min[u]) single_fails = false;
    CandidateRates one;
    one.orders = {cand.orders[static_cast<std::size_t>(i)]};
    one.s = cand.s.row(i);
    try {
      solve_timeshare(one, req.b_min, tol);
    } catch (const Infeasible&) {
      ++refused;
    }
  }
  const auto schedule = solve_timeshare(cand, req.b_min, tol);
  const Eigen::VectorXd avg = schedule.averaged_rates();
  double err = 0.0;
  for (int u = 0; u < 3; ++u) err = std::max(err, std::abs(avg[u] - req.b_min[u]) / req.b_min[u]);
  const bool ok = single_fails && refused == cand.s.rows() && schedule.entries.size() <= 3 &&
                  schedule.entries.size() >= 2 && err <= tol;
  return {ok, std::to_string(cand.s.rows()) + " orders, " + std::to_string(refused) +
                  " refused alone; schedule " + schedule.summary() + ", max error " + fmt("%.2e", err)};
}

Outcome order_consistency() {
  int bad = 0;
  for (const auto& r : g_min_energy_runs)
    if (!order_matches_certificate(r)) ++bad;
  return {bad == 0 && !g_min_energy_runs.empty(),
          std::to_string(g_min_energy_runs.size()) + " converged runs, " + std::to_string(bad) + " mismatches"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
  };
  // Criterion 8 runs last so it can inspect every solve made by the others.
  const std::vector<Criterion> criteria = {
      {1, "time-sharing LP reproduces the reference three-order example", three_order_example, 1.0},
      {2, "SIC rates telescope to the full-set log-det capacity", telescoping, 10.0},
      {3, "min-energy matches the two-user exhaustive grid oracle within 2%", grid_oracle, 300.0},
      {4, "max-rate recovers min-energy targets from its energies and multipliers", round_trip, 0.0},
      {5, "every solver output satisfies all subset capacity constraints", polymatroid, 0.0},
      {6, "sum-rate dominance proposed > mc_noma > noma > oma at 0 dB", dominance, 600.0},
      {7, "proposed needs less power than OMA at OMA's own rates", power_parity, 0.0},
      {9, "symmetric users need a time-shared schedule", time_sharing_necessity, 0.0},
      {8, "multiplier order reproduces the solver's decoding order", order_consistency, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += " [over the " + fmt("%.0f", c.budget_s) + " s budget]";
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d: %s -- %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
