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
#include <string>
#include <vector>

#include "lrmac/solver.hpp"
#include "lrmac/types.hpp"

namespace lrmac {

// max over nonempty T of sum_{u in T} rates[u] - C(T), in bits per symbol,
// where C(T) sums the subset log-det bound over subcarriers.
double polymatroid_violation(const ChannelSet& ch, const PowerAllocation& alloc, const Eigen::VectorXd& rates);

// |sum_u sic rate - full-set capacity| / max(1, capacity).
double telescoping_gap(const ChannelSet& ch, const PowerAllocation& alloc, const DecodingOrder& order);

// Sorting users by theta ascending (ties per the ordering module) gives the
// order the solver used for its final inner solve.
bool order_matches_certificate(const MinEnergyResult& r, double eps_theta = kDefaultEpsTheta);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_invariant_suite(int seeds, std::uint64_t base_seed = 1);

}  // namespace lrmac
