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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace lrmac::testing {

double lu_log2det(const CMatrix& m) {
  Eigen::FullPivLU<CMatrix> lu(m);
  const Complex det = lu.determinant();
  return std::log2(std::abs(det));
}

double lu_subset_rate(const ChannelSet& ch, const PowerAllocation& alloc, int n, const std::vector<int>& users) {
  const auto ly = ch.ap_antennas();
  CMatrix m = CMatrix::Identity(ly, ly) * ch.noise_variance;
  for (int u : users) {
    const CMatrix& h = ch.H[u][n];
    m += (alloc.e(u, n) / static_cast<double>(h.cols())) * h * h.adjoint();
  }
  return lu_log2det(m) - ly * std::log2(ch.noise_variance);
}

ChannelSet random_channels(std::mt19937_64& rng, int users, int ap_antennas, int subcarriers,
                           double noise_variance, const std::vector<int>& user_antennas) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> amp(0.3, 1.5);
  ChannelSet ch;
  ch.noise_variance = noise_variance;
  ch.H.resize(users);
  for (int u = 0; u < users; ++u) {
    const int lx = user_antennas.empty() ? 1 : user_antennas[u];
    const double a = amp(rng);
    for (int n = 0; n < subcarriers; ++n) {
      CMatrix h(ap_antennas, lx);
      for (int i = 0; i < ap_antennas; ++i)
        for (int j = 0; j < lx; ++j) h(i, j) = a * Complex(gauss(rng), gauss(rng));
      ch.H[u].push_back(h);
    }
  }
  return ch;
}

ChannelSet mercedes_channels(int subcarriers, double noise_variance) {
  ChannelSet ch;
  ch.noise_variance = noise_variance;
  ch.H.resize(3);
  const double s = std::sqrt(3.0) / 2.0;
  const double xs[3][2] = {{1.0, 0.0}, {-0.5, s}, {-0.5, -s}};
  for (int u = 0; u < 3; ++u)
    for (int n = 0; n < subcarriers; ++n) {
      CMatrix h(2, 1);
      h << xs[u][0], xs[u][1];
      ch.H[u].push_back(h);
    }
  return ch;
}

namespace {

// min sum_n a_n 2^{r_n} with sum r_n = b, r_n >= 0 (a_n > 0), by bisection
// on the common marginal cost.
double exp_fill(const std::vector<double>& a, double b) {
  if (b <= 0.0) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
  }
  auto rates_at = [&](double nu) {
    double total = 0.0;
    for (double x : a) total += std::max(0.0, std::log2(nu / x));
    return total;
  };
  double lo = *std::min_element(a.begin(), a.end());
  double hi = lo;
  while (rates_at(hi) < b) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rates_at(mid) < b ? lo : hi) = mid;
  }
  double cost = 0.0;
  for (double x : a) cost += x * std::max(1.0, hi / x);
  return cost;
}

// Energy for a fixed user-2 split r2 and decoding pattern (bit n set: user 1
// decoded last on subcarrier n), with user 1 optimally spread.
double pattern_energy(const std::vector<double>& g1, const std::vector<double>& g2, const std::vector<double>& r2,
                      unsigned pattern, double b1, double w1, double w2) {
  const std::size_t n_sc = g1.size();
  std::vector<double> a(n_sc);
  double constant = 0.0;
  for (std::size_t n = 0; n < n_sc; ++n) {
    const double x2 = std::exp2(r2[n]);
    if (pattern & (1u << n)) {
      // user 1 last: p1 = (2^r1 - 1)/g1, p2 = (2^r2 - 1) 2^r1 / g2
      a[n] = w1 / g1[n] + w2 * (x2 - 1.0) / g2[n];
      constant -= w1 / g1[n];
    } else {
      // user 2 last: p2 = (2^r2 - 1)/g2, p1 = (2^r1 - 1) 2^r2 / g1
      a[n] = w1 * x2 / g1[n];
      constant += w2 * (x2 - 1.0) / g2[n] - w1 * x2 / g1[n];
    }
  }
  return exp_fill(a, b1) + constant;
}

}  // namespace

double two_user_min_energy_oracle(const std::vector<double>& g1, const std::vector<double>& g2, double b1, double b2,
                                  double w1, double w2) {
  const int n_sc = static_cast<int>(g1.size());
  const unsigned patterns = 1u << n_sc;
  double best = std::numeric_limits<double>::infinity();

  // Coarse grid over the simplex of user 2 splits, then local pair moves.
  const int steps = 20;
  std::vector<std::pair<double, std::vector<double>>> coarse;
  auto visit = [&](const std::vector<double>& r2) {
    double e = std::numeric_limits<double>::infinity();
    for (unsigned p = 0; p < patterns; ++p) e = std::min(e, pattern_energy(g1, g2, r2, p, b1, w1, w2));
    return e;
  };
  std::vector<int> c(n_sc, 0);
  auto recurse = [&](auto&& self, int pos, int left) -> void {
    if (pos == n_sc - 1) {
      c[pos] = left;
      std::vector<double> r2(n_sc);
      for (int n = 0; n < n_sc; ++n) r2[n] = b2 * c[n] / steps;
      coarse.emplace_back(visit(r2), r2);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      c[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  recurse(recurse, 0, steps);
  std::sort(coarse.begin(), coarse.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  const int seeds = std::min<int>(8, static_cast<int>(coarse.size()));
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> r2 = coarse[s].second;
    double e = coarse[s].first;
    for (double step = b2 / steps; step > 1e-7 * std::max(1.0, b2); step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (int i = 0; i < n_sc; ++i)
          for (int j = 0; j < n_sc; ++j) {
            if (i == j || r2[j] < step) continue;
            std::vector<double> t = r2;
            t[i] += step;
            t[j] -= step;
            const double et = visit(t);
            if (et < e) {
              e = et;
              r2 = t;
              moved = true;
            }
          }
      }
    }
    best = std::min(best, e);
  }
  return best;
}

}  // namespace lrmac::testing
