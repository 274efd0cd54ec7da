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

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lrmac/types.hpp"

namespace lrmac {

// log2 det(R_nn + sum_{u in users} H_u R_xx(u) H_u^*) on subcarrier n,
// evaluated through a Cholesky factor. R_xx(u) = e[u][n] / L_xu * I.
double log2_det_received(const ChannelSet& ch, const PowerAllocation& alloc, int n,
                         std::span<const int> users);

// SIC rates: the user decoded k-th gets the log-det ratio between the
// covariance with and without itself, interference from users decoded later
// left in place.
RateMatrix sic_rates(const ChannelSet& ch, const PowerAllocation& alloc, const DecodingOrder& order);

// Sum over subcarriers of log2 det(R_nn + sum_T H R_xx H^*) / det(R_nn).
double subset_capacity(const ChannelSet& ch, const PowerAllocation& alloc, std::span<const int> users);

// Same as subset_capacity with the user set given as a bit mask.
double subset_capacity_mask(const ChannelSet& ch, const PowerAllocation& alloc, std::uint32_t mask);

// Per-user throughput in Mbit/s: (W / N) * sum_n b[u][n] / 1e6.
std::vector<double> throughput_mbps(const RateMatrix& rates, double bandwidth_hz, int num_subcarriers);

// Inverse bridge: bits per OFDM symbol set needed for a given Mbit/s rate.
double mbps_to_bits(double mbps, double bandwidth_hz, int num_subcarriers);

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace lrmac
