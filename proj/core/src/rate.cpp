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

#include "lrmac/rate.hpp"

#include <cmath>
#include <numbers>

#include "lrmac/errors.hpp"

namespace lrmac {
namespace {

void check_inputs(const ChannelSet& ch, const PowerAllocation& alloc) {
  if (!(ch.noise_variance > 0.0)) throw DomainError("singular noise covariance (noise_variance <= 0)");
  if (alloc.num_users() != ch.num_users() || alloc.num_subcarriers() != ch.num_subcarriers())
    throw DomainError("allocation shape does not match the channel set");
  if ((alloc.e.array() < 0.0).any()) throw DomainError("negative energy in allocation");
}

void add_user(Eigen::MatrixXcd& m, const ChannelSet& ch, const PowerAllocation& alloc, int u, int n) {
  const double e = alloc.e(u, n);
  if (e <= 0.0) return;
  const CMatrix& h = ch.H[u][n];
  m.noalias() += (e / static_cast<double>(h.cols())) * (h * h.adjoint());
}

double log2_det_hpd(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) throw DomainError("received covariance is not positive definite");
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc / std::numbers::ln2;
}

}  // namespace

double log2_det_received(const ChannelSet& ch, const PowerAllocation& alloc, int n,
                         std::span<const int> users) {
  check_inputs(ch, alloc);
  const int ly = ch.ap_antennas();
  Eigen::MatrixXcd m = ch.noise_variance * Eigen::MatrixXcd::Identity(ly, ly);
  for (int u : users) add_user(m, ch, alloc, u, n);
  return log2_det_hpd(m);
}

RateMatrix sic_rates(const ChannelSet& ch, const PowerAllocation& alloc, const DecodingOrder& order) {
  check_inputs(ch, alloc);
  const int users = ch.num_users();
  if (order.size() != users) throw DomainError("decoding order size does not match user count");
  const int ly = ch.ap_antennas();
  const double noise_logdet = ly * std::log2(ch.noise_variance);
  RateMatrix out(users, ch.num_subcarriers());
  Eigen::MatrixXcd m(ly, ly);
  for (int n = 0; n < ch.num_subcarriers(); ++n) {
    m = ch.noise_variance * Eigen::MatrixXcd::Identity(ly, ly);
    double previous = noise_logdet;
    for (int k = users - 1; k >= 0; --k) {
      const int u = order.user_at(k);
      if (alloc.e(u, n) <= 0.0) continue;
      add_user(m, ch, alloc, u, n);
      const double current = log2_det_hpd(m);
      out.b(u, n) = std::max(0.0, current - previous);
      previous = current;
    }
  }
  return out;
}

double subset_capacity(const ChannelSet& ch, const PowerAllocation& alloc, std::span<const int> users) {
  if (users.empty()) throw DomainError("subset_capacity needs a non-empty user set");
  check_inputs(ch, alloc);
  for (int u : users)
    if (u < 0 || u >= ch.num_users()) throw DomainError("user index out of range");
  const int ly = ch.ap_antennas();
  const double noise_logdet = ly * std::log2(ch.noise_variance);
  double total = 0.0;
  Eigen::MatrixXcd m(ly, ly);
  for (int n = 0; n < ch.num_subcarriers(); ++n) {
    m = ch.noise_variance * Eigen::MatrixXcd::Identity(ly, ly);
    for (int u : users) add_user(m, ch, alloc, u, n);
    total += log2_det_hpd(m) - noise_logdet;
  }
  return total;
}

double subset_capacity_mask(const ChannelSet& ch, const PowerAllocation& alloc, std::uint32_t mask) {
  std::vector<int> users;
  for (int u = 0; u < ch.num_users(); ++u)
    if (mask & (1u << u)) users.push_back(u);
  return subset_capacity(ch, alloc, users);
}

std::vector<double> throughput_mbps(const RateMatrix& rates, double bandwidth_hz, int num_subcarriers) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  if (num_subcarriers < 1) throw DomainError("subcarrier count must be positive");
  const Eigen::VectorXd bits = rates.per_user();
  std::vector<double> out(bits.size());
  for (Eigen::Index u = 0; u < bits.size(); ++u)
    out[u] = bandwidth_hz / num_subcarriers * bits[u] / 1e6;
  return out;
}

double mbps_to_bits(double mbps, double bandwidth_hz, int num_subcarriers) {
  return mbps * 1e6 * num_subcarriers / bandwidth_hz;
}

}  // namespace lrmac
