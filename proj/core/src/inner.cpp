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

#include "lrmac/inner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include "lrmac/errors.hpp"

namespace lrmac {
namespace detail {
namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

double log2det_llt(const Eigen::LLT<Eigen::MatrixXcd>& llt) {
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc * kInvLn2;
}

double projected_gradient_norm(const Eigen::VectorXd& q, const Eigen::VectorXd& grad,
                               const std::vector<char>& fixed) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (fixed[i]) continue;
    const double pg = q[i] > 0.0 ? grad[i] : std::max(grad[i], 0.0);
    worst = std::max(worst, std::abs(pg));
  }
  return worst;
}

}  // namespace

std::vector<double> nested_coefficients(std::span<const double> theta_by_position) {
  std::vector<double> coef(theta_by_position.size());
  double previous = 0.0;
  for (std::size_t k = 0; k < theta_by_position.size(); ++k) {
    coef[k] = std::max(0.0, theta_by_position[k] - previous);
    previous = theta_by_position[k];
  }
  return coef;
}

std::vector<double> nested_log2dets(const InnerProblem& prob, const Eigen::VectorXd& q) {
  const int users = prob.users();
  const int ly = static_cast<int>(prob.g.front().size());
  std::vector<double> out(users + 1, 0.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ly, ly);
  for (int k = users - 1; k >= 0; --k) {
    const int u = prob.order[k];
    if (q[u] > 0.0) {
      m.noalias() += q[u] * (prob.g[u] * prob.g[u].adjoint());
      out[k] = log2det_llt(Eigen::LLT<Eigen::MatrixXcd>(m));
    } else {
      out[k] = out[k + 1];
    }
  }
  return out;
}

double inner_objective(const InnerProblem& prob, const Eigen::VectorXd& q, Eigen::VectorXd* grad,
                       Eigen::MatrixXd* hess) {
  const int users = prob.users();
  const int ly = static_cast<int>(prob.g.front().size());
  double value = 0.0;
  for (int u = 0; u < users; ++u) value -= prob.price[u] * q[u];
  if (grad) {
    grad->resize(users);
    for (int u = 0; u < users; ++u) (*grad)[u] = -prob.price[u];
  }
  if (hess) hess->setZero(users, users);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ly, ly);
  Eigen::MatrixXcd minv_g(ly, users);
  for (int k = users - 1; k >= 0; --k) {
    const int u = prob.order[k];
    if (q[u] > 0.0) m.noalias() += q[u] * (prob.g[u] * prob.g[u].adjoint());
    const double c = prob.coef[k];
    if (c <= 0.0) continue;
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    value += c * log2det_llt(llt);
    if (!grad && !hess) continue;
    // Columns for users in S_k = order[k..U-1].
    for (int j = k; j < users; ++j) minv_g.col(j) = llt.solve(prob.g[prob.order[j]]);
    for (int j = k; j < users; ++j) {
      const int a = prob.order[j];
      if (grad) (*grad)[a] += c * kInvLn2 * prob.g[a].dot(minv_g.col(j)).real();
      if (hess) {
        for (int l = j; l < users; ++l) {
          const int b = prob.order[l];
          const double h = -c * kInvLn2 * std::norm(prob.g[a].dot(minv_g.col(l)));
          (*hess)(a, b) += h;
          if (a != b) (*hess)(b, a) += h;
        }
      }
    }
  }
  return value;
}

InnerResult solve_inner(const InnerProblem& prob, const Eigen::VectorXd& warm, const InnerOptions& opt) {
  const int users = prob.users();
  InnerResult res;
  res.q = warm.size() == users ? Eigen::VectorXd(warm.cwiseMax(0.0)) : Eigen::VectorXd::Zero(users);
  for (int u = 0; u < users; ++u)
    if (prob.fixed_zero[u]) res.q[u] = 0.0;

  Eigen::VectorXd grad, trial;
  Eigen::MatrixXd hess;
  double value = inner_objective(prob, res.q, &grad, &hess);
  constexpr double kArmijo = 1e-4;
  for (int it = 0; it < opt.max_iters; ++it) {
    res.iterations = it;
    const double pg = projected_gradient_norm(res.q, grad, prob.fixed_zero);
    res.pg_norm = pg;
    if (pg <= opt.tol) break;

    // Epsilon-active set: variables pinned at the bound with a gradient
    // pushing outward.
    double width = 0.0;
    for (int u = 0; u < users; ++u)
      if (!prob.fixed_zero[u]) width = std::max(width, std::abs(res.q[u] - std::max(0.0, res.q[u] + grad[u])));
    const double eps_active = std::min(1e-6, width);
    std::vector<int> free_vars;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(users);
    for (int u = 0; u < users; ++u) {
      if (prob.fixed_zero[u]) continue;
      if (res.q[u] <= eps_active && grad[u] <= 0.0) {
        dir[u] = -res.q[u];
      } else {
        free_vars.push_back(u);
      }
    }
    if (!free_vars.empty()) {
      const int nf = static_cast<int>(free_vars.size());
      Eigen::MatrixXd a(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (int i = 0; i < nf; ++i) {
        rhs[i] = grad[free_vars[i]];
        for (int j = 0; j < nf; ++j) a(i, j) = -hess(free_vars[i], free_vars[j]);
      }
      double mu = 1e-14 * std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
      Eigen::VectorXd step;
      for (int attempt = 0; attempt < 30; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(a + mu * Eigen::MatrixXd::Identity(nf, nf));
        if (llt.info() == Eigen::Success) {
          step = llt.solve(rhs);
          if (step.allFinite() && step.dot(rhs) > 0.0) break;
        }
        step.resize(0);
        mu = std::max(mu * 100.0, 1e-12);
      }
      if (step.size() == 0) step = rhs;
      for (int i = 0; i < nf; ++i) dir[free_vars[i]] = step[i];
    }

    auto line_search = [&](const Eigen::VectorXd& d) {
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        trial = (res.q + alpha * d).cwiseMax(0.0);
        const double tv = inner_objective(prob, trial, nullptr, nullptr);
        if (tv >= value + kArmijo * grad.dot(trial - res.q) && tv >= value) return tv;
      }
      return -std::numeric_limits<double>::infinity();
    };
    double next = line_search(dir);
    if (!std::isfinite(next)) {
      Eigen::VectorXd gd = grad;
      for (int u = 0; u < users; ++u)
        if (prob.fixed_zero[u]) gd[u] = 0.0;
      next = line_search(gd);
      if (!std::isfinite(next)) break;  // no further progress at machine precision
    }
    res.q = trial;
    value = inner_objective(prob, res.q, &grad, &hess);
  }
  res.value = value;
  res.pg_norm = projected_gradient_norm(res.q, grad, prob.fixed_zero);
  return res;
}

}  // namespace detail

std::vector<double> inner_weighted_max(std::span<const CVector> channels, double noise_variance,
                                       std::span<const double> theta, std::span<const double> prices,
                                       const InnerOptions& opt) {
  const int users = static_cast<int>(channels.size());
  if (users == 0) return {};
  if (static_cast<int>(theta.size()) != users || static_cast<int>(prices.size()) != users)
    throw DomainError("inner_weighted_max: theta/prices size mismatch");
  if (!(noise_variance > 0.0)) throw DomainError("inner_weighted_max: noise variance must be positive");
  for (int u = 0; u < users; ++u) {
    if (!(theta[u] >= 0.0)) throw DomainError("inner_weighted_max: theta must be non-negative");
    if (theta[u] > 0.0 && !(prices[u] > 0.0))
      throw DomainError("inner_weighted_max: a positive weight needs a positive energy price");
  }

  detail::InnerProblem prob;
  prob.order.resize(users);
  std::iota(prob.order.begin(), prob.order.end(), 0);
  std::stable_sort(prob.order.begin(), prob.order.end(), [&](int a, int b) { return theta[a] < theta[b]; });
  std::vector<double> sorted(users);
  for (int k = 0; k < users; ++k) sorted[k] = theta[prob.order[k]];
  const auto coef = detail::nested_coefficients(sorted);

  std::vector<double> scale(users, 0.0);
  double kappa = 0.0;
  prob.g.resize(users);
  prob.fixed_zero.assign(users, 0);
  prob.price.assign(users, 0.0);
  for (int u = 0; u < users; ++u) {
    const double gain = channels[u].squaredNorm();
    prob.g[u] = channels[u] / std::sqrt(noise_variance);
    if (gain <= 0.0 || theta[u] <= 0.0) {
      prob.fixed_zero[u] = 1;
      continue;
    }
    scale[u] = noise_variance / gain;
    prob.g[u] *= std::sqrt(scale[u]);
    prob.price[u] = prices[u] * scale[u];
    kappa = std::max(kappa, prob.price[u]);
  }
  std::vector<double> out(users, 0.0);
  if (kappa <= 0.0) return out;
  for (double& p : prob.price) p /= kappa;
  prob.coef.resize(users);
  for (int k = 0; k < users; ++k) prob.coef[k] = coef[k] / kappa;

  const auto res = detail::solve_inner(prob, Eigen::VectorXd::Zero(users), opt);
  for (int u = 0; u < users; ++u) out[u] = res.q[u] * scale[u];
  return out;
}

}  // namespace lrmac
