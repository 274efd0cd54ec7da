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

#include "lrmac/types.hpp"

namespace lrmac {

inline constexpr double kDefaultEpsTheta = 1e-6;
inline constexpr double kThetaFloor = 1e-12;
inline constexpr int kDefaultMaxOrders = 720;

// Users grouped by (near-)equal multiplier, clusters listed from the one
// decoded first (smallest theta) to the one decoded last.
struct OrderClusters {
  std::vector<std::vector<int>> clusters;
  DecodingOrder canonical_order;
  int cluster_of(int u) const;
};

// Sorts users by ascending theta and chains adjacent users whose theta differ
// by at most eps_theta * max(theta_i, theta_j, kThetaFloor). Ties inside a
// cluster are broken by ascending user index in canonical_order.
OrderClusters derive_order(std::span<const double> theta, double eps_theta = kDefaultEpsTheta);
inline OrderClusters derive_order(const DualCertificate& cert, double eps_theta = kDefaultEpsTheta) {
  return derive_order(cert.theta, eps_theta);
}

// Builds clusters from an explicit ordered partition.
OrderClusters make_clusters(std::vector<std::vector<int>> clusters);

// Cartesian product of within-cluster permutations, cluster positions fixed,
// in lexicographic order of the decode sequence. canonical_order comes first.
// Throws TooManyOrders if the product exceeds max_orders.
std::vector<DecodingOrder> enumerate_orders(const OrderClusters& oc, int max_orders = kDefaultMaxOrders);

// Number of orders enumerate_orders would produce (saturates at INT_MAX).
long long count_orders(const OrderClusters& oc);

}  // namespace lrmac
