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
#include <vector>

#include "lrmac/types.hpp"

namespace lrmac {

// Per-user aggregate rates of each candidate order under one fixed allocation.
// Row i of s belongs to orders[i].
struct CandidateRates {
  std::vector<DecodingOrder> orders;
  Eigen::MatrixXd s;
};

struct TimeShareEntry {
  DecodingOrder order;
  double weight = 0.0;
  Eigen::VectorXd rates;
};

struct TimeShareSchedule {
  std::vector<TimeShareEntry> entries;
  // False only when the cardinality search hit its budget and the schedule
  // came from a basic feasible LP solution instead.
  bool minimal = true;

  Eigen::VectorXd averaged_rates() const;
  double weight_sum() const;
  std::string summary() const;  // "1-2-3:0.52|2-3-1:0.17"
};

struct TimeShareOptions {
  double tol = 1e-3;  // relative per-user rate match
  long long max_subset_solves = 2'000'000;
};

CandidateRates rates_per_order(const ChannelSet& ch, const PowerAllocation& alloc,
                               std::span<const DecodingOrder> orders);

// Smallest set of orders whose convex combination reproduces b_min within
// tol per user; lexicographically-first subset among equal cardinalities.
// Throws Infeasible when b_min is outside the convex hull of the rows.
TimeShareSchedule solve_timeshare(const CandidateRates& cand, std::span<const double> b_min,
                                  const TimeShareOptions& opt = {});
inline TimeShareSchedule solve_timeshare(const CandidateRates& cand, std::span<const double> b_min, double tol) {
  TimeShareOptions opt;
  opt.tol = tol;
  return solve_timeshare(cand, b_min, opt);
}

// Time-weighted average of the per-subcarrier SIC rates over the schedule.
RateMatrix time_shared_rates(const ChannelSet& ch, const PowerAllocation& alloc,
                             const TimeShareSchedule& schedule);

// One row per entry: order (dash-joined, 1-based users), weight, per-user rates.
void write_schedule_csv(std::ostream& os, const TimeShareSchedule& schedule);

namespace detail {

// Minimizes sum_u |residual_u| / scale_u over the probability simplex:
// returns the optimal value and fills weights with a basic optimal solution.
double min_weighted_l1_simplex(const Eigen::MatrixXd& s, const Eigen::VectorXd& target,
                               const Eigen::VectorXd& scale, Eigen::VectorXd& weights);

}  // namespace detail
}  // namespace lrmac
