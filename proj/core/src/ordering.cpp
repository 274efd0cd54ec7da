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

#include "lrmac/ordering.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <string>

#include "lrmac/errors.hpp"

namespace lrmac {

int OrderClusters::cluster_of(int u) const {
  for (int c = 0; c < static_cast<int>(clusters.size()); ++c)
    if (std::find(clusters[c].begin(), clusters[c].end(), u) != clusters[c].end()) return c;
  throw DomainError("user not present in any cluster");
}

OrderClusters make_clusters(std::vector<std::vector<int>> clusters) {
  OrderClusters oc;
  std::vector<int> seq;
  for (auto& c : clusters) {
    std::sort(c.begin(), c.end());
    seq.insert(seq.end(), c.begin(), c.end());
  }
  oc.canonical_order = DecodingOrder(std::move(seq));
  oc.clusters = std::move(clusters);
  return oc;
}

OrderClusters derive_order(std::span<const double> theta, double eps_theta) {
  const int users = static_cast<int>(theta.size());
  for (double t : theta)
    if (!(t >= 0.0)) throw DomainError("derive_order: theta must be non-negative");
  std::vector<int> idx(users);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return theta[a] < theta[b]; });

  std::vector<std::vector<int>> clusters;
  for (int k = 0; k < users; ++k) {
    const int u = idx[k];
    if (k > 0) {
      const int prev = idx[k - 1];
      const double scale = std::max({theta[u], theta[prev], kThetaFloor});
      if (theta[u] - theta[prev] <= eps_theta * scale) {
        clusters.back().push_back(u);
        continue;
      }
    }
    clusters.push_back({u});
  }
  return make_clusters(std::move(clusters));
}

long long count_orders(const OrderClusters& oc) {
  long long total = 1;
  for (const auto& c : oc.clusters) {
    for (long long f = 2; f <= static_cast<long long>(c.size()); ++f) {
      if (total > LLONG_MAX / f) return LLONG_MAX;
      total *= f;
    }
  }
  return total;
}

std::vector<DecodingOrder> enumerate_orders(const OrderClusters& oc, int max_orders) {
  const long long count = count_orders(oc);
  if (count > max_orders)
    throw TooManyOrders("tie clusters yield " + std::to_string(count) + " candidate orders (limit " +
                        std::to_string(max_orders) + ")");
  std::vector<std::vector<int>> perm;
  for (const auto& c : oc.clusters) {
    auto sorted = c;
    std::sort(sorted.begin(), sorted.end());
    perm.push_back(std::move(sorted));
  }
  std::vector<DecodingOrder> out;
  out.reserve(static_cast<std::size_t>(count));
  while (true) {
    std::vector<int> seq;
    for (const auto& p : perm) seq.insert(seq.end(), p.begin(), p.end());
    out.emplace_back(std::move(seq));
    // Odometer: the last cluster varies fastest, which keeps lexicographic order.
    int c = static_cast<int>(perm.size()) - 1;
    for (; c >= 0; --c) {
      if (std::next_permutation(perm[c].begin(), perm[c].end())) break;
    }
    if (c < 0) break;
  }
  return out;
}

}  // namespace lrmac
