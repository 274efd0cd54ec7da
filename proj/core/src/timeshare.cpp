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

#include "lrmac/timeshare.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lrmac/errors.hpp"
#include "lrmac/rate.hpp"

namespace lrmac {

Eigen::VectorXd TimeShareSchedule::averaged_rates() const {
  if (entries.empty()) return {};
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(entries.front().rates.size());
  for (const auto& e : entries) avg += e.weight * e.rates;
  return avg;
}

double TimeShareSchedule::weight_sum() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

std::string TimeShareSchedule::summary() const {
  std::ostringstream os;
  os << std::setprecision(6);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << '|';
    os << entries[i].order.to_string() << ':' << entries[i].weight;
  }
  return os.str();
}

CandidateRates rates_per_order(const ChannelSet& ch, const PowerAllocation& alloc,
                               std::span<const DecodingOrder> orders) {
  if (orders.empty()) throw DomainError("rates_per_order needs at least one order");
  CandidateRates out;
  out.orders.assign(orders.begin(), orders.end());
  out.s.resize(static_cast<Eigen::Index>(orders.size()), ch.num_users());
  for (std::size_t i = 0; i < orders.size(); ++i)
    out.s.row(static_cast<Eigen::Index>(i)) = sic_rates(ch, alloc, orders[i]).per_user().transpose();
  return out;
}

namespace detail {

double min_weighted_l1_simplex(const Eigen::MatrixXd& s, const Eigen::VectorXd& target,
                               const Eigen::VectorXd& scale, Eigen::VectorXd& weights) {
  const int m = static_cast<int>(s.rows());
  const int users = static_cast<int>(s.cols());
  const int vars = m + 2 * users;
  const int rows = users + 1;
  // Columns: t_0..t_{m-1}, r+_0..r+_{U-1}, r-_0..r-_{U-1}, rhs.
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(rows, vars + 1);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(vars);
  for (int u = 0; u < users; ++u) {
    for (int i = 0; i < m; ++i) tab(u, i) = s(i, u);
    tab(u, m + u) = 1.0;
    tab(u, m + users + u) = -1.0;
    tab(u, vars) = target[u];
    cost[m + u] = cost[m + users + u] = 1.0 / scale[u];
  }
  for (int i = 0; i < m; ++i) tab(users, i) = 1.0;
  tab(users, vars) = 1.0;

  std::vector<int> basis(rows);
  auto pivot = [&](int r, int c) {
    tab.row(r) /= tab(r, c);
    for (int k = 0; k < rows; ++k)
      if (k != r && tab(k, c) != 0.0) tab.row(k) -= tab(k, c) * tab.row(r);
    basis[r] = c;
  };
  pivot(users, 0);
  for (int u = 0; u < users; ++u) pivot(u, tab(u, vars) >= 0.0 ? m + u : m + users + u);

  constexpr double kEps = 1e-12;
  for (int iter = 0; iter < 50 * (rows + vars); ++iter) {
    // Bland's rule: first column with a negative reduced cost.
    int enter = -1;
    for (int j = 0; j < vars && enter < 0; ++j) {
      double reduced = cost[j];
      for (int r = 0; r < rows; ++r) reduced -= cost[basis[r]] * tab(r, j);
      if (reduced < -kEps) enter = j;
    }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      if (tab(r, enter) > kEps) {
        const double ratio = tab(r, vars) / tab(r, enter);
        if (ratio < best - kEps || (std::abs(ratio - best) <= kEps && leave >= 0 && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) break;  // unbounded cannot happen: objective >= 0
    pivot(leave, enter);
  }
  weights = Eigen::VectorXd::Zero(m);
  double value = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double x = std::max(0.0, tab(r, vars));
    if (basis[r] < m) weights[basis[r]] = x;
    value += cost[basis[r]] * x;
  }
  return value;
}

}  // namespace detail

namespace {

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

bool within(const Eigen::VectorXd& achieved, const Eigen::VectorXd& target, const Eigen::VectorXd& scale) {
  return ((achieved - target).array().abs() <= scale.array()).all();
}

TimeShareSchedule make_schedule(const CandidateRates& cand, const std::vector<int>& idx,
                                const Eigen::VectorXd& w) {
  TimeShareSchedule out;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    TimeShareEntry e;
    e.order = cand.orders[idx[j]];
    e.weight = w[static_cast<Eigen::Index>(j)];
    e.rates = cand.s.row(idx[j]).transpose();
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TimeShareSchedule solve_timeshare(const CandidateRates& cand, std::span<const double> b_min,
                                  const TimeShareOptions& opt) {
  const int m = static_cast<int>(cand.s.rows());
  const int users = static_cast<int>(cand.s.cols());
  if (m == 0 || static_cast<int>(cand.orders.size()) != m)
    throw DomainError("solve_timeshare needs a non-empty candidate set");
  if (static_cast<int>(b_min.size()) != users) throw DomainError("b_min size does not match the user count");
  if (!(opt.tol >= 0.0)) throw DomainError("tolerance must be non-negative");

  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(b_min.data(), users);
  const double norm = target.cwiseAbs().maxCoeff();
  Eigen::VectorXd scale(users);
  for (int u = 0; u < users; ++u) scale[u] = opt.tol * std::abs(target[u]) + 1e-12 * (1.0 + norm);

  // sum_u |r_u| / scale_u > U rules out every per-user |r_u| <= scale_u.
  Eigen::VectorXd lp_weights;
  const double lp_value = detail::min_weighted_l1_simplex(cand.s, target, scale, lp_weights);
  if (lp_value > users * (1.0 + 1e-9))
    throw Infeasible("rate target lies outside the convex hull of the candidate orders");

  long long solves = 0;
  bool exhausted = true;
  const int k_max = std::min(m, users + 1);
  for (int k = 1; k <= k_max && exhausted; ++k) {
    std::vector<int> idx(k);
    for (int j = 0; j < k; ++j) idx[j] = j;
    do {
      if (++solves > opt.max_subset_solves) {
        exhausted = false;
        break;
      }
      Eigen::VectorXd w(k);
      if (k == 1) {
        w[0] = 1.0;
      } else {
        const Eigen::VectorXd last = cand.s.row(idx[k - 1]).transpose();
        Eigen::MatrixXd a(users, k - 1);
        for (int j = 0; j < k - 1; ++j) a.col(j) = cand.s.row(idx[j]).transpose() - last;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < k - 1) continue;
        const Eigen::VectorXd head = qr.solve(target - last);
        if ((head.array() < -1e-10).any()) continue;
        w.head(k - 1) = head.cwiseMax(0.0);
        w[k - 1] = 1.0 - w.head(k - 1).sum();
        if (w[k - 1] < -1e-10) continue;
        w[k - 1] = std::max(0.0, w[k - 1]);
        w /= w.sum();
      }
      Eigen::VectorXd achieved = Eigen::VectorXd::Zero(users);
      for (int j = 0; j < k; ++j) achieved += w[j] * cand.s.row(idx[j]).transpose();
      if (within(achieved, target, scale)) return make_schedule(cand, idx, w);
    } while (next_combination(idx, m));
  }

  if (exhausted) throw Infeasible("no convex combination of candidate orders meets the rate target");
  if (lp_value <= 1.0 + 1e-9) {
    std::vector<int> idx;
    std::vector<double> ws;
    for (int i = 0; i < m; ++i)
      if (lp_weights[i] > 1e-12) {
        idx.push_back(i);
        ws.push_back(lp_weights[i]);
      }
    Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
    w /= w.sum();
    auto out = make_schedule(cand, idx, w);
    out.minimal = false;
    return out;
  }
  throw Infeasible("subset search budget exhausted before a feasible schedule was found");
}

RateMatrix time_shared_rates(const ChannelSet& ch, const PowerAllocation& alloc,
                             const TimeShareSchedule& schedule) {
  if (schedule.entries.empty()) throw DomainError("empty schedule");
  RateMatrix out(ch.num_users(), ch.num_subcarriers());
  for (const auto& e : schedule.entries) out.b += e.weight * sic_rates(ch, alloc, e.order).b;
  return out;
}

void write_schedule_csv(std::ostream& os, const TimeShareSchedule& schedule) {
  const int users = schedule.entries.empty() ? 0 : static_cast<int>(schedule.entries.front().rates.size());
  os << "order,weight";
  for (int u = 0; u < users; ++u) os << ",rate_user" << (u + 1);
  os << '\n';
  os << std::setprecision(6);
  for (const auto& e : schedule.entries) {
    os << e.order.to_string() << ',' << e.weight;
    for (int u = 0; u < users; ++u) os << ',' << e.rates[u];
    os << '\n';
  }
}

}  // namespace lrmac
