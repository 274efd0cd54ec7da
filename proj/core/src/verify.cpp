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

#include "lrmac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrmac/baselines.hpp"
#include "lrmac/channel.hpp"
#include "lrmac/errors.hpp"
#include "lrmac/ordering.hpp"
#include "lrmac/rate.hpp"

namespace lrmac {

double polymatroid_violation(const ChannelSet& ch, const PowerAllocation& alloc, const Eigen::VectorXd& rates) {
  const int users = ch.num_users();
  if (users > 20) throw DomainError("polymatroid_violation: too many users to enumerate");
  if (rates.size() != users) throw DomainError("polymatroid_violation: one rate per user expected");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << users); ++mask) {
    double sum = 0.0;
    for (int u = 0; u < users; ++u)
      if (mask & (1u << u)) sum += rates[u];
    worst = std::max(worst, sum - subset_capacity_mask(ch, alloc, mask));
  }
  return worst;
}

double telescoping_gap(const ChannelSet& ch, const PowerAllocation& alloc, const DecodingOrder& order) {
  const double total = sic_rates(ch, alloc, order).sum();
  const double cap = subset_capacity_mask(ch, alloc, (1u << ch.num_users()) - 1);
  return std::abs(total - cap) / std::max(1.0, cap);
}

bool order_matches_certificate(const MinEnergyResult& r, double eps_theta) {
  return derive_order(r.cert.theta, eps_theta).canonical_order == r.order;
}

std::vector<CheckResult> run_invariant_suite(int seeds, std::uint64_t base_seed) {
  struct Tally {
    std::string name;
    int failures = 0;
    double worst = 0.0;
  };
  std::vector<Tally> tallies = {{"telescoping identity"},       {"polymatroid constraints"},
                                {"rate targets met"},           {"theta order consistency"},
                                {"oma order invariance"},       {"noma reaches full-set capacity"},
                                {"mc_noma at least noma"},      {"solver converged"}};
  auto note = [&](int i, bool ok, double value) {
    if (!ok) ++tallies[i].failures;
    tallies[i].worst = std::max(tallies[i].worst, value);
  };

  for (int s = 0; s < seeds; ++s) {
    ScenarioConfig sc;
    sc.num_users = 3;
    sc.ap_antennas = 2;
    sc.num_subcarriers = 8;
    sc.distances_m = {2.0, 4.0, 7.0};
    sc.seed = base_seed + static_cast<std::uint64_t>(s);
    const ChannelSet ch = generate_channels(sc);
    EnergyBudget budget;
    budget.e_max.assign(sc.num_users, dbm_to_watts(15.0));

    const auto oma = oma_allocate(ch, budget);
    const RateMatrix other = sic_rates(ch, oma.alloc, DecodingOrder({2, 1, 0}));
    const double oma_diff = (other.b - oma.rates.b).cwiseAbs().maxCoeff();
    note(4, oma_diff <= 1e-12, oma_diff);

    const auto noma = noma_allocate(ch, budget);
    const double gap = telescoping_gap(ch, noma.alloc, noma.order);
    note(0, gap <= 1e-9, gap);
    note(5, gap <= 1e-9, gap);
    const auto mc = mc_noma_allocate(ch, budget);
    const double shortfall = std::max(0.0, noma.rates.sum() - mc.rates.sum()) / std::max(1.0, noma.rates.sum());
    note(6, shortfall <= 1e-9, shortfall);

    RateRequirement req;
    const Eigen::VectorXd target = oma.rates.per_user();
    req.b_min.assign(target.data(), target.data() + target.size());
    try {
      const auto r = min_energy_allocate(ch, req);
      const Eigen::VectorXd got = r.rates.per_user();
      const double viol = polymatroid_violation(ch, r.alloc, got);
      note(1, viol <= 1e-9, std::max(0.0, viol));
      double miss = 0.0;
      for (int u = 0; u < sc.num_users; ++u) miss = std::max(miss, (req.b_min[u] - got[u]) / req.b_min[u]);
      note(2, miss <= 1e-3, std::max(0.0, miss));
      note(3, order_matches_certificate(r), 0.0);
      note(7, true, 0.0);
    } catch (const std::exception&) {
      note(7, false, 1.0);
    }
  }

  std::vector<CheckResult> out;
  for (const auto& t : tallies) {
    std::ostringstream d;
    d << t.failures << "/" << seeds << " failures, worst " << t.worst;
    out.push_back({t.name, t.failures == 0, d.str()});
  }
  return out;
}

}  // namespace lrmac
