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

#include <span>
#include <vector>

namespace lrmac {

// Powers p_n = max(0, level - 1/gain_n) over parallel channels with SNR per
// unit power gain_n.
struct WaterFill {
  std::vector<double> powers;
  double level = 0.0;
};

// Maximizes sum_n log2(1 + p_n gain_n) subject to sum_n p_n = budget.
WaterFill water_fill_budget(std::span<const double> gains, double budget);

// Minimizes sum_n p_n subject to sum_n log2(1 + p_n gain_n) = bits.
// Throws Infeasible when bits > 0 and every gain is zero.
WaterFill water_fill_target(std::span<const double> gains, double bits);

}  // namespace lrmac
