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

// Independent reference computations used by the tests. Nothing here calls
// into the allocator itself.

#include <random>
#include <vector>

#include "lrmac/types.hpp"

namespace lrmac::testing {

// log2 det via LU, no Cholesky.
double lu_log2det(const CMatrix& m);

// log2 det(I + sum_{u in users} (e/L)·H H^*) / sigma^2, built from scratch.
double lu_subset_rate(const ChannelSet& ch, const PowerAllocation& alloc, int n, const std::vector<int>& users);

// iid CN(0, 1) entries scaled by per-user amplitude; unit noise.
ChannelSet random_channels(std::mt19937_64& rng, int users, int ap_antennas, int subcarriers,
                           double noise_variance = 1.0, const std::vector<int>& user_antennas = {});

// Three unit vectors 120 degrees apart on every subcarrier.
ChannelSet mercedes_channels(int subcarriers, double noise_variance = 1.0);

// Minimum of w1*E1 + w2*E2 for two single-antenna users on a one-antenna
// AP meeting per-user totals b (bits), with free time sharing. Searches
// user 2's per-subcarrier rate split on a refined grid for each of the
// 2^N per-subcarrier decoding patterns.
double two_user_min_energy_oracle(const std::vector<double>& g1, const std::vector<double>& g2, double b1, double b2,
                                  double w1, double w2);

}  // namespace lrmac::testing
