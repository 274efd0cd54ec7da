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

struct InnerOptions {
  double tol = 1e-8;  // projected-gradient infinity norm, normalized units
  int max_iters = 200;
};

// Single-subcarrier weighted rate maximization
//   max_p  sum_u theta_u b_u(p) - sum_u price_u p_u,  p >= 0,
// where b_u are SIC rates under the order that decodes ascending theta first
// (ties by user index). channels[u] is the L_y x 1 channel of user u and
// noise_variance the per-antenna noise power. Returns transmit powers.
std::vector<double> inner_weighted_max(std::span<const CVector> channels, double noise_variance,
                                       std::span<const double> theta, std::span<const double> prices,
                                       const InnerOptions& opt = {});

namespace detail {

// Normalized form: unit noise, variables q >= 0. Position k of order
// decodes user order[k]; nested set S_k = {order[k], ..., order[U-1]} carries
// weight coef[k] >= 0. Users flagged in fixed_zero stay at zero.
struct InnerProblem {
  std::vector<CVector> g;
  std::vector<int> order;
  std::vector<double> coef;
  std::vector<double> price;
  std::vector<char> fixed_zero;

  int users() const { return static_cast<int>(g.size()); }
};

struct InnerResult {
  Eigen::VectorXd q;
  double value = 0.0;
  double pg_norm = 0.0;  // projected gradient infinity norm at return
  int iterations = 0;
};

// Evaluates the objective and optionally its gradient / Hessian.
double inner_objective(const InnerProblem& prob, const Eigen::VectorXd& q, Eigen::VectorXd* grad,
                       Eigen::MatrixXd* hess);

// Projected Newton with an epsilon-active set and Armijo backtracking along
// the projection arc.
InnerResult solve_inner(const InnerProblem& prob, const Eigen::VectorXd& warm, const InnerOptions& opt);

// log2 det(I + sum_{i in S_k} q_i g_i g_i^H) for every position k; entry U is 0.
std::vector<double> nested_log2dets(const InnerProblem& prob, const Eigen::VectorXd& q);

// Coefficients sum_k coef_k 1_{u in S_k} for weights theta sorted along order.
std::vector<double> nested_coefficients(std::span<const double> theta_by_position);

}  // namespace detail
}  // namespace lrmac
