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

#include "lrmac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "lrmac/errors.hpp"
#include "lrmac/inner.hpp"
#include "lrmac/rate.hpp"
#include "lrmac/waterfill.hpp"

namespace lrmac {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Multi-carrier problem in normalized units: unit noise and, per user, a
// power unit s_u = sigma^2 / mean_n |h_un|^2 (unit mean received SNR).
struct Normalized {
  int users = 0;
  int subcarriers = 0;
  std::vector<std::vector<CVector>> g;  // g[n][u]
  std::vector<double> scale;
  std::vector<char> zero_channel;
};

Normalized normalize(const ChannelSet& ch) {
  ch.validate();
  Normalized out;
  out.users = ch.num_users();
  out.subcarriers = ch.num_subcarriers();
  for (int u = 0; u < out.users; ++u)
    if (ch.user_antennas(u) != 1)
      throw DomainError("the allocator optimizes scalar powers: every user needs exactly one antenna");
  out.scale.assign(out.users, 0.0);
  out.zero_channel.assign(out.users, 0);
  for (int u = 0; u < out.users; ++u) {
    double gain = 0.0;
    for (int n = 0; n < out.subcarriers; ++n) gain += ch.H[u][n].squaredNorm();
    gain /= out.subcarriers;
    if (gain > 0.0) {
      out.scale[u] = ch.noise_variance / gain;
    } else {
      out.zero_channel[u] = 1;
    }
  }
  out.g.assign(out.subcarriers, std::vector<CVector>(out.users));
  for (int n = 0; n < out.subcarriers; ++n)
    for (int u = 0; u < out.users; ++u) {
      const double f = out.zero_channel[u] ? 0.0 : std::sqrt(out.scale[u] / ch.noise_variance);
      out.g[n][u] = ch.H[u][n].col(0) * f;
    }
  return out;
}

struct Sweep {
  Eigen::MatrixXd q;      // users x subcarriers
  Eigen::MatrixXd rates;  // bits, users x subcarriers, under the sweep order
  double value = 0.0;     // sum_n [sum theta b - sum price e], original units
  double max_pg = 0.0;
};

// Solves the per-subcarrier inner problems for one order and one set of
// position weights. price_q is the energy price per normalized power unit.
Sweep sweep(const Normalized& P, const std::vector<int>& order, const std::vector<double>& theta_by_pos,
            const std::vector<double>& price_q, const std::vector<char>& fixed, const Eigen::MatrixXd* warm,
            const InnerOptions& inner) {
  Sweep out;
  out.q = Eigen::MatrixXd::Zero(P.users, P.subcarriers);
  out.rates = Eigen::MatrixXd::Zero(P.users, P.subcarriers);
  double kappa = 0.0;
  for (int u = 0; u < P.users; ++u)
    if (!fixed[u]) kappa = std::max(kappa, price_q[u]);
  if (kappa <= 0.0) return out;

  detail::InnerProblem prob;
  prob.order = order;
  prob.fixed_zero = fixed;
  prob.coef = detail::nested_coefficients(theta_by_pos);
  for (double& c : prob.coef) c /= kappa;
  prob.price.resize(P.users);
  for (int u = 0; u < P.users; ++u) prob.price[u] = price_q[u] / kappa;

  for (int n = 0; n < P.subcarriers; ++n) {
    prob.g = P.g[n];
    const Eigen::VectorXd start = warm ? Eigen::VectorXd(warm->col(n)) : Eigen::VectorXd::Zero(P.users);
    const auto res = detail::solve_inner(prob, start, inner);
    out.q.col(n) = res.q;
    out.value += kappa * res.value;
    out.max_pg = std::max(out.max_pg, res.pg_norm);
    const auto f = detail::nested_log2dets(prob, res.q);
    for (int k = 0; k < P.users; ++k) out.rates(order[k], n) = std::max(0.0, f[k] - f[k + 1]);
  }
  return out;
}

double set_log2det(const std::vector<CVector>& g, const Eigen::VectorXd& q, const std::vector<int>& users) {
  const auto ly = g.front().size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ly, ly);
  for (int u : users)
    if (q[u] > 0.0) m.noalias() += q[u] * (g[u] * g[u].adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log(llt.matrixLLT()(i, i).real());
  return 2.0 * acc / kLn2;
}

PowerAllocation to_allocation(const Normalized& P, const Eigen::MatrixXd& q) {
  PowerAllocation out(P.users, P.subcarriers);
  for (int u = 0; u < P.users; ++u) out.e.row(u) = q.row(u) * P.scale[u];
  return out;
}

std::string partition_key(const std::vector<std::vector<int>>& parts) {
  std::string key;
  for (const auto& c : parts) {
    key += '[';
    for (int u : c) key += std::to_string(u) + ',';
    key += ']';
  }
  return key;
}

// Solves (J + mu I) d = rhs for a symmetric positive semidefinite J.
Eigen::VectorXd regularized_solve(Eigen::MatrixXd j, const Eigen::VectorXd& rhs) {
  const auto k = j.rows();
  j = 0.5 * (j + j.transpose());
  double mu = 1e-12 * std::max(1e-300, j.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 40; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(j + mu * Eigen::MatrixXd::Identity(k, k));
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd d = llt.solve(rhs);
      if (d.allFinite() && d.dot(rhs) > 0.0) return d;
    }
    mu *= 10.0;
  }
  return rhs;  // fall back to a plain gradient step
}

class MinEnergySolver {
 public:
  MinEnergySolver(const ChannelSet& ch, const RateRequirement& req, const SolverOptions& opt)
      : ch_(ch), req_(req), opt_(opt), P_(normalize(ch)) {
    inner_.tol = std::min(opt.inner_tol, 1e-11);
    inner_.max_iters = 200;
    const int users = P_.users;
    double w_max = 0.0;
    for (int u = 0; u < users; ++u) w_max = std::max(w_max, req.weight_of(u));
    price_q_.assign(users, 0.0);
    fixed_.assign(users, 1);
    for (int u = 0; u < users; ++u) {
      if (req.b_min[u] <= 0.0) {
        inactive_.push_back(u);
        continue;
      }
      if (P_.zero_channel[u])
        throw Infeasible("user " + std::to_string(u + 1) + " has a zero channel but a positive rate target");
      active_.push_back(u);
      fixed_[u] = 0;
      // A zero weight makes energy free for that user; keep the price positive.
      const double w = std::max(req.weight_of(u), 1e-9 * w_max);
      price_q_[u] = w * P_.scale[u];
    }
    warm_ = Eigen::MatrixXd::Zero(users, P_.subcarriers);
  }

  MinEnergyResult run() {
    MinEnergyResult result;
    const int users = P_.users;
    if (active_.empty()) {
      result.alloc = PowerAllocation(users, P_.subcarriers);
      result.rates = RateMatrix(users, P_.subcarriers);
      result.cert.theta.assign(users, 0.0);
      result.clusters = derive_order(result.cert.theta, opt_.eps_theta);
      result.order = result.clusters.canonical_order;
      result.schedule.entries.push_back({result.order, 1.0, Eigen::VectorXd::Zero(users)});
      return result;
    }

    std::vector<double> theta = initial_theta();
    subgradient_phase(theta);
    refine(theta);
    return finalize(theta);
  }

 private:
  struct Eval {
    Sweep sw;
    std::vector<double> cluster_rate;
    double dual = 0.0;
  };

  std::vector<int> order_of(const std::vector<std::vector<int>>& parts) const {
    std::vector<int> order = inactive_;
    for (const auto& c : parts) order.insert(order.end(), c.begin(), c.end());
    return order;
  }

  double target_of(const std::vector<int>& c) const {
    double b = 0.0;
    for (int u : c) b += req_.b_min[u];
    return b;
  }

  Eval evaluate(const std::vector<std::vector<int>>& parts, const std::vector<double>& phi, bool keep_warm) {
    std::vector<double> theta_pos(inactive_.size(), 0.0);
    for (std::size_t k = 0; k < parts.size(); ++k) theta_pos.insert(theta_pos.end(), parts[k].size(), phi[k]);
    Eval e;
    e.sw = sweep(P_, order_of(parts), theta_pos, price_q_, fixed_, &warm_, inner_);
    if (keep_warm) warm_ = e.sw.q;
    for (int u : active_) {
      if (e.sw.q.row(u).sum() / P_.subcarriers > opt_.energy_cap)
        throw Infeasible("energy diverged for user " + std::to_string(u + 1) + " before the rate target was met");
    }
    e.dual = -e.sw.value;
    e.cluster_rate.resize(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      double r = 0.0;
      for (int u : parts[k]) r += e.sw.rates.row(u).sum();
      e.cluster_rate[k] = r;
      e.dual += phi[k] * target_of(parts[k]);
    }
    return e;
  }

  void record(const std::string& phase, double dual, double residual) {
    best_dual_ = std::max(best_dual_, dual);
    trace_.push_back({iterations_, phase, dual, best_dual_, residual});
  }

  void count_iteration() {
    if (++iterations_ > opt_.max_outer_iters)
      throw NotConverged("min_energy_allocate: iteration limit reached");
  }

  std::vector<double> initial_theta() const {
    std::vector<double> theta(P_.users, 0.0);
    for (int u : active_) {
      std::vector<double> gains(P_.subcarriers);
      for (int n = 0; n < P_.subcarriers; ++n) gains[n] = P_.g[n][u].squaredNorm();
      const auto wf = water_fill_target(gains, req_.b_min[u]);
      theta[u] = wf.level * price_q_[u] * kLn2;
    }
    return theta;
  }

  std::vector<std::vector<int>> singletons_by_theta(const std::vector<double>& theta) const {
    std::vector<int> idx = active_;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return theta[a] < theta[b]; });
    std::vector<std::vector<int>> parts;
    for (int u : idx) parts.push_back({u});
    return parts;
  }

  // Projected subgradient ascent on the rate multipliers. Steps are scaled
  // per user by the initial multiplier and the target so that the
  // dimensionless step_scale / sqrt(t) schedule applies to any units.
  void subgradient_phase(std::vector<double>& theta) {
    const std::vector<double> unit = theta;
    const int iters = std::min(opt_.warm_start_iters, opt_.max_outer_iters);
    for (int t = 1; t <= iters; ++t) {
      count_iteration();
      const auto parts = singletons_by_theta(theta);
      std::vector<double> phi;
      for (const auto& c : parts) phi.push_back(theta[c.front()]);
      const Eval e = evaluate(parts, phi, true);
      double residual = 0.0;
      for (int u : active_) {
        const double gap = (req_.b_min[u] - e.sw.rates.row(u).sum()) / req_.b_min[u];
        residual = std::max(residual, std::abs(gap));
        // A positive target keeps the multiplier positive at the optimum.
        theta[u] = std::max(1e-3 * unit[u], theta[u] + opt_.step_scale / std::sqrt(static_cast<double>(t)) * unit[u] * gap);
      }
      record("subgradient", e.dual, residual);
    }
  }

  // Active-set refinement over ordered tie clusters: Newton ascent on the
  // cluster multipliers, merging clusters whose multipliers meet and
  // splitting a cluster when its target leaves the cluster's polymatroid.
  void refine(std::vector<double>& theta) {
    auto parts = singletons_by_theta(theta);
    std::vector<double> phi;
    for (const auto& c : parts) phi.push_back(std::max(theta[c.front()], 1e-300));
    merge_close(parts, phi);

    std::map<std::string, int> visits;
    const double newton_tol = 1e-3 * opt_.rate_tol;
    while (true) {
      newton(parts, phi, newton_tol);
      if (++visits[partition_key(parts)] > 3) break;
      if (!split_violated(parts, phi)) break;
    }
    for (std::size_t k = 0; k < parts.size(); ++k)
      for (int u : parts[k]) theta[u] = phi[k];
  }

  void merge_close(std::vector<std::vector<int>>& parts, std::vector<double>& phi) const {
    for (std::size_t k = 0; k + 1 < parts.size();) {
      const double gap = phi[k + 1] - phi[k];
      if (gap <= 2.0 * opt_.eps_theta * std::max(phi[k], phi[k + 1])) {
        const double bk = target_of(parts[k]);
        const double bn = target_of(parts[k + 1]);
        phi[k] = (phi[k] * bk + phi[k + 1] * bn) / (bk + bn);
        parts[k].insert(parts[k].end(), parts[k + 1].begin(), parts[k + 1].end());
        std::sort(parts[k].begin(), parts[k].end());
        parts.erase(parts.begin() + static_cast<long>(k) + 1);
        phi.erase(phi.begin() + static_cast<long>(k) + 1);
        if (k > 0) --k;
      } else {
        ++k;
      }
    }
  }

  void newton(std::vector<std::vector<int>>& parts, std::vector<double>& phi, double tol) {
    double prev_dual = -kInf;
    int stalled = 0;
    while (true) {
      count_iteration();
      const int clusters = static_cast<int>(parts.size());
      const Eval base = evaluate(parts, phi, true);
      Eigen::VectorXd grad(clusters);
      double residual = 0.0;
      for (int k = 0; k < clusters; ++k) {
        const double b = target_of(parts[k]);
        grad[k] = b - base.cluster_rate[k];
        residual = std::max(residual, std::abs(grad[k]) / b);
      }
      record("newton", base.dual, residual);
      if (residual <= tol) return;
      // A dual that no longer moves means working precision.
      stalled = base.dual > prev_dual + 1e-13 * std::abs(base.dual) ? 0 : stalled + 1;
      if (stalled >= 3) return;
      prev_dual = base.dual;

      Eigen::MatrixXd jac(clusters, clusters);
      for (int k = 0; k < clusters; ++k) {
        std::vector<double> bumped = phi;
        double delta = 1e-6 * phi[k];
        if (k + 1 < clusters) delta = std::min(delta, 0.25 * (phi[k + 1] - phi[k]));
        bumped[k] += delta;
        const Eval e = evaluate(parts, bumped, false);
        for (int j = 0; j < clusters; ++j) jac(j, k) = (e.cluster_rate[j] - base.cluster_rate[j]) / delta;
      }
      const Eigen::VectorXd dir = regularized_solve(jac, grad);

      double alpha_cross = kInf;
      int cross_at = -1;
      for (int k = 0; k + 1 < clusters; ++k) {
        const double closing = dir[k] - dir[k + 1];
        if (closing > 0.0) {
          const double a = (phi[k + 1] - phi[k]) / closing;
          if (a < alpha_cross) {
            alpha_cross = a;
            cross_at = k;
          }
        }
      }
      double alpha_max = 1.0;
      if (dir[0] < 0.0) alpha_max = std::min(alpha_max, 0.5 * phi[0] / -dir[0]);
      // Near-flat rate curves give huge Newton steps; grow by at most 10x.
      for (int k = 0; k < clusters; ++k)
        if (dir[k] > 0.0) alpha_max = std::min(alpha_max, 9.0 * phi[k] / dir[k]);
      const bool limited = alpha_cross <= alpha_max;
      double alpha = std::min(alpha_max, alpha_cross);
      const double slope = grad.dot(dir);

      bool accepted = false;
      Eval trial;
      std::vector<double> next;
      for (int ls = 0; ls < 50; ++ls, alpha *= 0.5) {
        next = phi;
        for (int k = 0; k < clusters; ++k) next[k] += alpha * dir[k];
        if (limited && alpha == alpha_cross) next[cross_at + 1] = next[cross_at];
        try {
          trial = evaluate(parts, next, false);
        } catch (const Infeasible&) {
          continue;  // overshoot past the energy cap
        }
        if (trial.dual >= base.dual + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) return;  // stalled at working precision
      const bool hit_cross = limited && alpha == alpha_cross;
      phi = next;
      if (hit_cross) {
        // Keep the clusters apart if the dual no longer ascends along dir.
        double ascent = 0.0;
        for (int k = 0; k < clusters; ++k) ascent += (target_of(parts[k]) - trial.cluster_rate[k]) * dir[k];
        if (ascent > 0.0) {
          phi[cross_at + 1] = phi[cross_at] * (1.0 + 0.5 * opt_.eps_theta);
          merge_close(parts, phi);
        } else {
          phi[cross_at + 1] = phi[cross_at] * (1.0 + 10.0 * opt_.eps_theta);
        }
      }
      warm_ = trial.sw.q;
    }
  }

  // Looks for the most violated subset constraint inside any tie cluster and
  // splits that cluster with the violating subset decoded later.
  bool split_violated(std::vector<std::vector<int>>& parts, std::vector<double>& phi) {
    const int clusters = static_cast<int>(parts.size());
    double worst = 0.0;
    int worst_cluster = -1;
    std::uint32_t worst_mask = 0;
    for (int k = 0; k < clusters; ++k) {
      const auto& c = parts[k];
      const int size = static_cast<int>(c.size());
      if (size < 2) continue;
      std::vector<int> later;
      for (int j = k + 1; j < clusters; ++j) later.insert(later.end(), parts[j].begin(), parts[j].end());
      std::vector<double> base(P_.subcarriers);
      for (int n = 0; n < P_.subcarriers; ++n) base[n] = later.empty() ? 0.0 : set_log2det(P_.g[n], warm_.col(n), later);
      const double bc = target_of(c);
      for (std::uint32_t mask = 1; mask + 1 < (1u << size); ++mask) {
        std::vector<int> set = later;
        double need = 0.0;
        for (int i = 0; i < size; ++i)
          if (mask & (1u << i)) {
            set.push_back(c[i]);
            need += req_.b_min[c[i]];
          }
        double cap = 0.0;
        for (int n = 0; n < P_.subcarriers; ++n) cap += set_log2det(P_.g[n], warm_.col(n), set) - base[n];
        const double violation = (need - cap) / bc;
        if (violation > worst) {
          worst = violation;
          worst_cluster = k;
          worst_mask = mask;
        }
      }
    }
    if (worst_cluster < 0 || worst <= 1e-2 * opt_.rate_tol) return false;
    const auto c = parts[worst_cluster];
    std::vector<int> early, late;
    for (int i = 0; i < static_cast<int>(c.size()); ++i) (worst_mask & (1u << i) ? late : early).push_back(c[i]);
    const double p = phi[worst_cluster];
    parts[worst_cluster] = early;
    parts.insert(parts.begin() + worst_cluster + 1, late);
    phi[worst_cluster] = p * (1.0 - 5.0 * opt_.eps_theta);
    phi.insert(phi.begin() + worst_cluster + 1, p * (1.0 + 5.0 * opt_.eps_theta));
    return true;
  }

  MinEnergyResult finalize(std::vector<double> theta) {
    const int users = P_.users;
    MinEnergyResult result;
    OrderClusters oc = derive_order(theta, opt_.eps_theta);
    // Exact ties inside each cluster so the canonical order sorts theta.
    for (const auto& c : oc.clusters) {
      double mean = 0.0;
      for (int u : c) mean += theta[u];
      mean /= static_cast<double>(c.size());
      for (int u : c) theta[u] = mean;
    }
    oc = derive_order(theta, opt_.eps_theta);

    std::vector<double> theta_pos(users);
    const auto& seq = oc.canonical_order.sequence();
    for (int k = 0; k < users; ++k) theta_pos[k] = theta[seq[k]];
    Sweep final = sweep(P_, seq, theta_pos, price_q_, fixed_, &warm_, inner_);
    result.alloc = to_allocation(P_, final.q);
    result.cert.theta = theta;
    result.clusters = oc;
    result.order = oc.canonical_order;

    const RateMatrix canonical = sic_rates(ch_, result.alloc, result.order);
    const Eigen::VectorXd per_user = canonical.per_user();
    bool single = true;
    for (int u : active_) single = single && per_user[u] >= req_.b_min[u] * (1.0 - opt_.rate_tol);
    if (single) {
      result.schedule.entries.push_back({result.order, 1.0, per_user});
      result.rates = canonical;
    } else {
      // Zero-target users have no power; their relative order is irrelevant.
      std::vector<std::vector<int>> enum_clusters;
      for (const auto& c : oc.clusters) {
        if (theta[c.front()] == 0.0) {
          for (int u : c) enum_clusters.push_back({u});
        } else {
          enum_clusters.push_back(c);
        }
      }
      const auto orders = enumerate_orders(make_clusters(enum_clusters), opt_.max_orders);
      const auto cand = rates_per_order(ch_, result.alloc, orders);
      try {
        result.schedule = solve_timeshare(cand, req_.b_min, opt_.rate_tol);
      } catch (const Infeasible& ex) {
        throw NotConverged(std::string("min_energy_allocate: time sharing failed: ") + ex.what());
      }
      result.rates = time_shared_rates(ch_, result.alloc, result.schedule);
    }

    double objective = 0.0;
    for (int u = 0; u < users; ++u) objective += req_.weight_of(u) * result.alloc.e.row(u).sum();
    result.objective = objective;
    result.dual_value = best_dual_;
    result.iterations = iterations_;
    result.trace = std::move(trace_);
    return result;
  }

  const ChannelSet& ch_;
  const RateRequirement& req_;
  const SolverOptions& opt_;
  Normalized P_;
  InnerOptions inner_;
  std::vector<int> active_, inactive_;
  std::vector<double> price_q_;
  std::vector<char> fixed_;
  Eigen::MatrixXd warm_;
  std::vector<TraceRow> trace_;
  double best_dual_ = -kInf;
  int iterations_ = 0;
};

}  // namespace

void RateRequirement::validate(int users) const {
  if (static_cast<int>(b_min.size()) != users) throw DomainError("b_min needs one entry per user");
  for (double b : b_min)
    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("b_min entries must be finite and non-negative");
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != users) throw DomainError("weights need one entry per user");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw DomainError("weights must be non-negative");
      total += w;
    }
    if (total <= 0.0) throw DomainError("weights must not all be zero");
  }
}

void EnergyBudget::validate(int users) const {
  if (static_cast<int>(e_max.size()) != users) throw DomainError("e_max needs one entry per user");
  for (double e : e_max)
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("e_max entries must be finite and non-negative");
  if (!rate_weights.empty()) {
    if (static_cast<int>(rate_weights.size()) != users) throw DomainError("rate_weights need one entry per user");
    for (double w : rate_weights)
      if (!(w >= 0.0)) throw DomainError("rate weights must be non-negative");
  }
}

void SolverOptions::validate() const {
  if (!(rate_tol > 0.0) || !(inner_tol > 0.0) || max_outer_iters < 1 || !(step_scale > 0.0) ||
      !(energy_cap > 0.0) || !(eps_theta > 0.0) || max_orders < 1 || warm_start_iters < 0)
    throw DomainError("solver options must be positive");
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "iteration,phase,dual_value,best_dual,max_rate_residual\n";
  os.precision(10);
  for (const auto& r : trace)
    os << r.iteration << ',' << r.phase << ',' << r.dual_value << ',' << r.best_dual << ',' << r.max_rate_residual
       << '\n';
}

MinEnergyResult min_energy_allocate(const ChannelSet& ch, const RateRequirement& req, const SolverOptions& opt) {
  opt.validate();
  req.validate(ch.num_users());
  return MinEnergySolver(ch, req, opt).run();
}

MaxRateResult max_rate_allocate(const ChannelSet& ch, const EnergyBudget& budget, const SolverOptions& opt) {
  opt.validate();
  budget.validate(ch.num_users());
  const Normalized P = normalize(ch);
  const int users = P.users;
  const int subcarriers = P.subcarriers;

  std::vector<double> weights(users);
  for (int u = 0; u < users; ++u) weights[u] = budget.weight_of(u);
  MaxRateResult result;
  result.cert.theta = weights;
  result.cert.lambda.assign(users, 0.0);
  result.order = derive_order(weights, opt.eps_theta).canonical_order;
  const auto& seq = result.order.sequence();
  std::vector<double> theta_pos(users);
  for (int k = 0; k < users; ++k) theta_pos[k] = weights[seq[k]];
  const auto coef = detail::nested_coefficients(theta_pos);
  result.alloc = PowerAllocation(users, subcarriers);

  std::vector<int> active;
  for (int u = 0; u < users; ++u)
    if (weights[u] > 0.0 && budget.e_max[u] > 0.0 && !P.zero_channel[u]) active.push_back(u);
  if (active.empty()) {
    result.rates = sic_rates(ch, result.alloc, result.order);
    return result;
  }

  // Block coordinate ascent on the primal: each user in turn solves its
  // exact single-user problem against the others, a separable concave
  // maximization under its budget (common marginal mu across subcarriers).
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(users, subcarriers);
  std::vector<double> cap(users, 0.0), mu(users, 0.0);
  for (int u : active) {
    cap[u] = budget.e_max[u] / P.scale[u];
    std::vector<double> gains(subcarriers);
    for (int n = 0; n < subcarriers; ++n) gains[n] = P.g[n][u].squaredNorm();
    const auto wf = water_fill_budget(gains, cap[u]);
    for (int n = 0; n < subcarriers; ++n) q(u, n) = wf.powers[n];
  }
  std::vector<int> pos(users);
  for (int k = 0; k < users; ++k) pos[seq[k]] = k;
  const auto ly = P.g.front().front().size();

  auto weighted_rate = [&](const Eigen::MatrixXd& qq) {
    double v = 0.0;
    for (int n = 0; n < subcarriers; ++n) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ly, ly);
      for (int k = users - 1; k >= 0; --k) {
        const int j = seq[k];
        if (qq(j, n) > 0.0) m.noalias() += qq(j, n) * (P.g[n][j] * P.g[n][j].adjoint());
        if (coef[k] > 0.0) {
          Eigen::LLT<Eigen::MatrixXcd> llt(m);
          double ld = 0.0;
          for (Eigen::Index i = 0; i < m.rows(); ++i) ld += std::log(llt.matrixLLT()(i, i).real());
          v += coef[k] * 2.0 * ld / kLn2;
        }
      }
    }
    return v;
  };

  std::vector<std::vector<double>> a(subcarriers, std::vector<double>(users));
  std::vector<TraceRow> trace;
  double best = -kInf;
  double change = kInf;
  int sweeps = 0;
  while (true) {
    change = 0.0;
    for (int u : active) {
      // a[n][k]: effective gain of u against users decoded from position k on.
      for (int n = 0; n < subcarriers; ++n) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ly, ly);
        for (int k = users - 1; k >= 0; --k) {
          const int j = seq[k];
          if (j != u && q(j, n) > 0.0) m.noalias() += q(j, n) * (P.g[n][j] * P.g[n][j].adjoint());
          if (k <= pos[u] && coef[k] > 0.0) {
            a[n][k] = std::max(0.0, P.g[n][u].dot(m.llt().solve(P.g[n][u])).real());
          } else {
            a[n][k] = 0.0;
          }
        }
      }
      auto marginal = [&](int n, double x) {
        double d = 0.0;
        for (int k = 0; k <= pos[u]; ++k)
          if (a[n][k] > 0.0) d += coef[k] * a[n][k] / (1.0 + x * a[n][k]);
        return d / kLn2;
      };
      auto power_at = [&](int n, double m_level) {
        if (marginal(n, 0.0) <= m_level) return 0.0;
        double lo = 0.0, hi = 1.0;
        while (marginal(n, hi) > m_level) hi *= 2.0;
        for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (marginal(n, mid) > m_level ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
      };
      auto spend = [&](double m_level) {
        double s = 0.0;
        for (int n = 0; n < subcarriers; ++n) s += power_at(n, m_level);
        return s;
      };
      double hi = 0.0;
      for (int n = 0; n < subcarriers; ++n) hi = std::max(hi, marginal(n, 0.0));
      double lo = hi;
      while (spend(lo) < cap[u]) lo *= 0.5;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        (spend(mid) > cap[u] ? lo : hi) = mid;
      }
      mu[u] = std::sqrt(lo * hi);
      double used = 0.0;
      std::vector<double> next(subcarriers);
      for (int n = 0; n < subcarriers; ++n) used += next[n] = power_at(n, mu[u]);
      for (int n = 0; n < subcarriers; ++n) {
        const double v = used > 0.0 ? next[n] * cap[u] / used : 0.0;
        change = std::max(change, std::abs(v - q(u, n)) / cap[u]);
        q(u, n) = v;
      }
    }
    ++sweeps;
    const double value = weighted_rate(q);
    best = std::max(best, value);
    trace.push_back({sweeps, "coordinate", value, best, change});
    if (change <= 1e-10) break;
    if (sweeps >= opt.max_outer_iters) {
      if (change > opt.rate_tol)
        throw NotConverged("max_rate_allocate: allocation still moving after " + std::to_string(sweeps) + " sweeps");
      break;
    }
  }

  result.alloc = to_allocation(P, q);
  result.rates = sic_rates(ch, result.alloc, result.order);
  for (int u : active) result.cert.lambda[u] = mu[u] / P.scale[u];
  const Eigen::VectorXd per_user = result.rates.per_user();
  double objective = 0.0;
  for (int u = 0; u < users; ++u) objective += weights[u] * per_user[u];
  result.objective = objective;
  result.dual_value = best;
  result.iterations = sweeps;
  result.trace = std::move(trace);
  return result;
}

double stationarity_residual(const ChannelSet& ch, const PowerAllocation& alloc, std::span<const double> theta,
                             std::span<const double> prices) {
  const Normalized P = normalize(ch);
  const int users = P.users;
  if (static_cast<int>(theta.size()) != users || static_cast<int>(prices.size()) != users)
    throw DomainError("stationarity_residual: size mismatch");
  const OrderClusters oc = derive_order(theta, kDefaultEpsTheta);
  detail::InnerProblem prob;
  prob.order = oc.canonical_order.sequence();
  std::vector<double> theta_pos(users);
  for (int k = 0; k < users; ++k) theta_pos[k] = theta[prob.order[k]];
  prob.coef = detail::nested_coefficients(theta_pos);
  prob.fixed_zero.assign(users, 0);
  prob.price.assign(users, 0.0);
  double kappa = 0.0;
  for (int u = 0; u < users; ++u) {
    if (P.zero_channel[u] || theta[u] <= 0.0) {
      prob.fixed_zero[u] = 1;
      continue;
    }
    prob.price[u] = prices[u] * P.scale[u];
    kappa = std::max(kappa, prob.price[u]);
  }
  if (kappa <= 0.0) return 0.0;
  for (double& c : prob.coef) c /= kappa;
  for (double& p : prob.price) p /= kappa;
  double worst = 0.0;
  for (int n = 0; n < P.subcarriers; ++n) {
    prob.g = P.g[n];
    Eigen::VectorXd q(users);
    for (int u = 0; u < users; ++u) q[u] = prob.fixed_zero[u] ? 0.0 : alloc.e(u, n) / P.scale[u];
    Eigen::VectorXd grad;
    detail::inner_objective(prob, q, &grad, nullptr);
    for (int u = 0; u < users; ++u) {
      if (prob.fixed_zero[u]) continue;
      const double pg = q[u] > 0.0 ? grad[u] : std::max(grad[u], 0.0);
      worst = std::max(worst, std::abs(pg));
    }
  }
  return worst;
}

}  // namespace lrmac
