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

#include "lrmac/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrmac/errors.hpp"

namespace lrmac {
namespace {

std::vector<int> by_descending_gain(std::span<const double> gains) {
  std::vector<int> idx;
  for (int n = 0; n < static_cast<int>(gains.size()); ++n)
    if (gains[n] > 0.0) idx.push_back(n);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return gains[a] > gains[b]; });
  return idx;
}

std::vector<double> fill(std::span<const double> gains, double level) {
  std::vector<double> p(gains.size(), 0.0);
  for (std::size_t n = 0; n < gains.size(); ++n)
    if (gains[n] > 0.0) p[n] = std::max(0.0, level - 1.0 / gains[n]);
  return p;
}

}  // namespace

WaterFill water_fill_budget(std::span<const double> gains, double budget) {
  if (budget < 0.0) throw DomainError("water_fill_budget: negative budget");
  WaterFill out;
  out.powers.assign(gains.size(), 0.0);
  const auto idx = by_descending_gain(gains);
  if (idx.empty() || budget == 0.0) return out;
  double inv_sum = 0.0;
  double level = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    inv_sum += 1.0 / gains[idx[k]];
    const double candidate = (budget + inv_sum) / static_cast<double>(k + 1);
    const bool last = k + 1 == idx.size();
    if (last || candidate <= 1.0 / gains[idx[k + 1]]) {
      level = candidate;
      break;
    }
  }
  out.level = level;
  out.powers = fill(gains, level);
  return out;
}

WaterFill water_fill_target(std::span<const double> gains, double bits) {
  if (bits < 0.0) throw DomainError("water_fill_target: negative rate target");
  WaterFill out;
  out.powers.assign(gains.size(), 0.0);
  if (bits == 0.0) return out;
  const auto idx = by_descending_gain(gains);
  if (idx.empty()) throw Infeasible("water_fill_target: no usable subchannel");
  double log_sum = 0.0;
  double level = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    log_sum += std::log2(gains[idx[k]]);
    const double candidate = std::exp2((bits - log_sum) / static_cast<double>(k + 1));
    const bool last = k + 1 == idx.size();
    if (last || candidate <= 1.0 / gains[idx[k + 1]]) {
      level = candidate;
      break;
    }
  }
  out.level = level;
  out.powers = fill(gains, level);
  return out;
}

}  // namespace lrmac
