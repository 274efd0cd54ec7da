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

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lrmac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Per-user, per-subcarrier channel matrices H[u][n] (L_y x L_xu) and the
// per-subcarrier noise power. Noise is white: R_nn = noise_variance * I.
struct ChannelSet {
  std::vector<std::vector<CMatrix>> H;
  double noise_variance = 1.0;

  int num_users() const { return static_cast<int>(H.size()); }
  int num_subcarriers() const { return H.empty() ? 0 : static_cast<int>(H.front().size()); }
  int ap_antennas() const;
  int user_antennas(int u) const { return static_cast<int>(H[u].front().cols()); }

  // Throws DomainError when shapes are inconsistent or noise_variance <= 0.
  void validate() const;
};

// Transmit energy of user u on subcarrier n (rows users, columns subcarriers).
struct PowerAllocation {
  Eigen::MatrixXd e;

  PowerAllocation() = default;
  PowerAllocation(int users, int subcarriers) : e(Eigen::MatrixXd::Zero(users, subcarriers)) {}
  explicit PowerAllocation(Eigen::MatrixXd energies) : e(std::move(energies)) {}

  int num_users() const { return static_cast<int>(e.rows()); }
  int num_subcarriers() const { return static_cast<int>(e.cols()); }
  Eigen::VectorXd per_user() const { return e.rowwise().sum(); }
  double total() const { return e.sum(); }
};

// Bits per subcarrier-symbol, rows users, columns subcarriers.
struct RateMatrix {
  Eigen::MatrixXd b;

  RateMatrix() = default;
  RateMatrix(int users, int subcarriers) : b(Eigen::MatrixXd::Zero(users, subcarriers)) {}
  explicit RateMatrix(Eigen::MatrixXd bits) : b(std::move(bits)) {}

  int num_users() const { return static_cast<int>(b.rows()); }
  int num_subcarriers() const { return static_cast<int>(b.cols()); }
  Eigen::VectorXd per_user() const { return b.rowwise().sum(); }
  double sum() const { return b.sum(); }
};

// SIC decoding order. seq[k] is the (0-based) user decoded k-th, so seq[0]
// sees every other user as interference and seq.back() sees none.
class DecodingOrder {
 public:
  DecodingOrder() = default;
  explicit DecodingOrder(std::vector<int> seq);

  static DecodingOrder identity(int users);

  const std::vector<int>& sequence() const { return seq_; }
  int size() const { return static_cast<int>(seq_.size()); }
  int user_at(int position) const { return seq_[position]; }
  // Inverse permutation: decode position of user u.
  int position_of(int u) const;

  // 1-based users joined by '-', e.g. "3-1-2".
  std::string to_string() const;
  static DecodingOrder parse(const std::string& text);

  friend bool operator==(const DecodingOrder&, const DecodingOrder&) = default;
  friend auto operator<=>(const DecodingOrder&, const DecodingOrder&) = default;

 private:
  std::vector<int> seq_;
};

}  // namespace lrmac

namespace lrmac {

// Lagrange multipliers: theta for the per-user rate constraints (or the given
// rate weights of the rate-maximization problem), lambda for the per-user
// energy budgets. Users with larger theta are decoded later.
struct DualCertificate {
  std::vector<double> theta;
  std::vector<double> lambda;
};

}  // namespace lrmac
