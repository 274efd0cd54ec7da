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

#include <vector>

#include "lrmac/solver.hpp"
#include "lrmac/types.hpp"

namespace lrmac {

struct OmaAssignment {
  std::vector<int> subcarrier_owner;

  std::vector<int> subcarriers_of(int user) const;
  void validate(int users) const;
};

OmaAssignment round_robin_assignment(int users, int subcarriers);

struct OmaResult {
  OmaAssignment assignment;
  PowerAllocation alloc;
  RateMatrix rates;
};

// Budget mode: every user water-fills its own subcarriers under E_max[u].
OmaResult oma_allocate(const ChannelSet& ch, const EnergyBudget& budget);
// Target mode: minimal energy per user meeting b_min[u] on its subcarriers.
OmaResult oma_allocate(const ChannelSet& ch, const RateRequirement& target);

// Strongest aggregate channel decoded first, ties by user index.
DecodingOrder channel_strength_order(const ChannelSet& ch);

struct BaselineResult {
  PowerAllocation alloc;
  RateMatrix rates;
  DecodingOrder order;
};

// Flat power E_max[u] / N on every subcarrier, SIC in channel strength order.
BaselineResult noma_allocate(const ChannelSet& ch, const EnergyBudget& budget);
RateMatrix noma_rates(const ChannelSet& ch, const EnergyBudget& budget);

// Per-subcarrier power shaping under the channel strength order. Users are
// filled one at a time starting from the last decoded, each against noise
// plus the users decoded after it.
BaselineResult mc_noma_allocate(const ChannelSet& ch, const EnergyBudget& budget);

}  // namespace lrmac
