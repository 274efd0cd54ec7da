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

#include "lrmac/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lrmac/errors.hpp"
#include "lrmac/rate.hpp"
#include "lrmac/waterfill.hpp"

namespace lrmac {
namespace {

void require_single_antenna(const ChannelSet& ch) {
  for (int u = 0; u < ch.num_users(); ++u)
    if (ch.user_antennas(u) != 1) throw DomainError("baselines need single-antenna users");
}

// Single-user SNR per unit energy with maximal-ratio combining.
std::vector<double> mrc_gains(const ChannelSet& ch, int u, const std::vector<int>& subcarriers) {
  std::vector<double> g;
  g.reserve(subcarriers.size());
  for (int n : subcarriers) g.push_back(ch.H[u][n].squaredNorm() / ch.noise_variance);
  return g;
}

template <typename Fill>
OmaResult oma_common(const ChannelSet& ch, Fill fill) {
  ch.validate();
  require_single_antenna(ch);
  const int users = ch.num_users();
  const int subcarriers = ch.num_subcarriers();
  if (subcarriers < users) throw DomainError("OMA needs at least one subcarrier per user");
  OmaResult out;
  out.assignment = round_robin_assignment(users, subcarriers);
  out.alloc = PowerAllocation(users, subcarriers);
  for (int u = 0; u < users; ++u) {
    const auto own = out.assignment.subcarriers_of(u);
    const auto powers = fill(u, mrc_gains(ch, u, own));
    for (std::size_t i = 0; i < own.size(); ++i) out.alloc.e(u, own[i]) = powers[i];
  }
  // Owners never share a subcarrier, so any order gives the single-user rate.
  out.rates = sic_rates(ch, out.alloc, DecodingOrder::identity(users));
  return out;
}

}  // namespace

std::vector<int> OmaAssignment::subcarriers_of(int user) const {
  std::vector<int> out;
  for (int n = 0; n < static_cast<int>(subcarrier_owner.size()); ++n)
    if (subcarrier_owner[n] == user) out.push_back(n);
  return out;
}

void OmaAssignment::validate(int users) const {
  for (int owner : subcarrier_owner)
    if (owner < 0 || owner >= users) throw DomainError("subcarrier owner out of range");
}

OmaAssignment round_robin_assignment(int users, int subcarriers) {
  if (users < 1) throw DomainError("round_robin_assignment: no users");
  OmaAssignment a;
  a.subcarrier_owner.resize(subcarriers);
  for (int n = 0; n < subcarriers; ++n) a.subcarrier_owner[n] = n % users;
  return a;
}

OmaResult oma_allocate(const ChannelSet& ch, const EnergyBudget& budget) {
  budget.validate(ch.num_users());
  return oma_common(ch, [&](int u, const std::vector<double>& gains) {
    return water_fill_budget(gains, budget.e_max[u]).powers;
  });
}

OmaResult oma_allocate(const ChannelSet& ch, const RateRequirement& target) {
  target.validate(ch.num_users());
  return oma_common(ch, [&](int u, const std::vector<double>& gains) {
    if (target.b_min[u] <= 0.0) return std::vector<double>(gains.size(), 0.0);
    try {
      return water_fill_target(gains, target.b_min[u]).powers;
    } catch (const Infeasible&) {
      throw Infeasible("OMA: user " + std::to_string(u + 1) + " has no usable subcarrier");
    }
  });
}

DecodingOrder channel_strength_order(const ChannelSet& ch) {
  const int users = ch.num_users();
  std::vector<double> energy(users, 0.0);
  for (int u = 0; u < users; ++u)
    for (const auto& h : ch.H[u]) energy[u] += h.squaredNorm();
  std::vector<int> seq(users);
  std::iota(seq.begin(), seq.end(), 0);
  std::stable_sort(seq.begin(), seq.end(), [&](int a, int b) { return energy[a] > energy[b]; });
  return DecodingOrder(seq);
}

BaselineResult noma_allocate(const ChannelSet& ch, const EnergyBudget& budget) {
  ch.validate();
  budget.validate(ch.num_users());
  const int users = ch.num_users();
  const int subcarriers = ch.num_subcarriers();
  BaselineResult out;
  out.order = channel_strength_order(ch);
  out.alloc = PowerAllocation(users, subcarriers);
  for (int u = 0; u < users; ++u) out.alloc.e.row(u).setConstant(budget.e_max[u] / subcarriers);
  out.rates = sic_rates(ch, out.alloc, out.order);
  return out;
}

RateMatrix noma_rates(const ChannelSet& ch, const EnergyBudget& budget) { return noma_allocate(ch, budget).rates; }

BaselineResult mc_noma_allocate(const ChannelSet& ch, const EnergyBudget& budget) {
  ch.validate();
  require_single_antenna(ch);
  budget.validate(ch.num_users());
  const int users = ch.num_users();
  const int subcarriers = ch.num_subcarriers();
  const auto ly = ch.ap_antennas();
  BaselineResult out;
  out.order = channel_strength_order(ch);
  out.alloc = PowerAllocation(users, subcarriers);
  const auto& seq = out.order.sequence();

  std::vector<CMatrix> cov(subcarriers, CMatrix::Identity(ly, ly) * ch.noise_variance);
  for (int k = users - 1; k >= 0; --k) {
    const int u = seq[k];
    std::vector<double> gains(subcarriers, 0.0);
    for (int n = 0; n < subcarriers; ++n) {
      const CVector h = ch.H[u][n].col(0);
      gains[n] = std::max(0.0, h.dot(cov[n].llt().solve(h)).real());
    }
    const double weight = budget.weight_of(u);
    if (weight <= 0.0) continue;
    const auto wf = water_fill_budget(gains, budget.e_max[u]);
    for (int n = 0; n < subcarriers; ++n) {
      out.alloc.e(u, n) = wf.powers[n];
      const CVector h = ch.H[u][n].col(0);
      cov[n].noalias() += wf.powers[n] * (h * h.adjoint());
    }
  }
  out.rates = sic_rates(ch, out.alloc, out.order);
  return out;
}

}  // namespace lrmac
