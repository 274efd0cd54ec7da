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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrmac/ordering.hpp"
#include "lrmac/timeshare.hpp"
#include "lrmac/types.hpp"

namespace lrmac {

// Per-user rate targets (bits summed over subcarriers) and energy weights.
struct RateRequirement {
  std::vector<double> b_min;
  std::vector<double> weights;  // empty means all ones

  double weight_of(int u) const { return weights.empty() ? 1.0 : weights[u]; }
  void validate(int users) const;
};

// Per-user energy budgets (sum over subcarriers) and rate weights.
struct EnergyBudget {
  std::vector<double> e_max;
  std::vector<double> rate_weights;  // empty means all ones

  double weight_of(int u) const { return rate_weights.empty() ? 1.0 : rate_weights[u]; }
  void validate(int users) const;
};

struct SolverOptions {
  double rate_tol = 1e-4;
  double inner_tol = 1e-8;
  int max_outer_iters = 5000;
  double step_scale = 1.0;
  // Divergence guard on the mean received SNR per subcarrier of any user.
  double energy_cap = 1e6;
  double eps_theta = kDefaultEpsTheta;
  int max_orders = kDefaultMaxOrders;
  // Subgradient iterations that seed the cluster refinement.
  int warm_start_iters = 10;

  void validate() const;
};

struct TraceRow {
  int iteration = 0;
  std::string phase;
  double dual_value = 0.0;
  double best_dual = 0.0;
  double max_rate_residual = 0.0;
};

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);

struct MinEnergyResult {
  PowerAllocation alloc;
  // Time-shared per-subcarrier rates; equals sic_rates under the canonical
  // order when the schedule has a single entry.
  RateMatrix rates;
  DualCertificate cert;
  OrderClusters clusters;
  TimeShareSchedule schedule;
  DecodingOrder order;  // canonical order used for the final inner solve
  double objective = 0.0;   // sum_u w_u sum_n e[u][n]
  double dual_value = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
};

struct MaxRateResult {
  PowerAllocation alloc;
  RateMatrix rates;
  DualCertificate cert;
  DecodingOrder order;
  double objective = 0.0;  // sum_u theta_u sum_n b[u][n]
  double dual_value = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
};

// Weighted energy-sum minimization under per-user rate targets. Throws
// Infeasible (zero channel, energy divergence) or NotConverged.
MinEnergyResult min_energy_allocate(const ChannelSet& ch, const RateRequirement& req,
                                    const SolverOptions& opt = {});

// Weighted rate-sum maximization under per-user energy budgets.
MaxRateResult max_rate_allocate(const ChannelSet& ch, const EnergyBudget& budget,
                                const SolverOptions& opt = {});

// Largest projected gradient (normalized units, same scaling as the solver)
// of sum_u theta_u b_u - sum_u price_u e_u at alloc, over all subcarriers,
// with SIC under the ascending-theta order.
double stationarity_residual(const ChannelSet& ch, const PowerAllocation& alloc,
                             std::span<const double> theta, std::span<const double> prices);

}  // namespace lrmac
