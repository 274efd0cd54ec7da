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

#include "lrmac/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lrmac/errors.hpp"

namespace lrmac {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

int ChannelSet::ap_antennas() const {
  if (H.empty() || H.front().empty()) return 0;
  return static_cast<int>(H.front().front().rows());
}

void ChannelSet::validate() const {
  if (H.empty()) throw DomainError("channel set has no users");
  if (!(noise_variance > 0.0)) throw DomainError("noise variance must be positive");
  const auto n_sub = H.front().size();
  if (n_sub == 0) throw DomainError("channel set has no subcarriers");
  const auto rows = H.front().front().rows();
  for (const auto& user : H) {
    if (user.size() != n_sub) throw DomainError("users disagree on the subcarrier count");
    const auto cols = user.front().cols();
    for (const auto& m : user) {
      if (m.rows() != rows || m.cols() != cols || cols < 1)
        throw DomainError("channel matrix shape mismatch");
    }
  }
}

void ScenarioConfig::validate() const {
  if (num_users < 1) throw DomainError("num_users must be >= 1");
  if (ap_antennas < 1) throw DomainError("ap_antennas must be >= 1");
  if (num_subcarriers < 1) throw DomainError("num_subcarriers must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth_hz must be positive");
  if (!(center_freq_hz > 0.0)) throw DomainError("center_freq_hz must be positive");
  if (!antennas_per_user.empty()) {
    if (static_cast<int>(antennas_per_user.size()) != num_users)
      throw DomainError("antennas_per_user needs one entry per user");
    for (int a : antennas_per_user)
      if (a < 1) throw DomainError("antennas_per_user entries must be >= 1");
  }
  if (!distances_m.empty()) {
    if (static_cast<int>(distances_m.size()) != num_users)
      throw DomainError("distances_m needs one entry per user");
    for (double d : distances_m)
      if (!(d > 0.0)) throw DomainError("distances must be positive");
  }
}

double path_loss_db(double d_m, double f_hz, const PathLossModel& model) {
  if (!(d_m > 0.0)) throw DomainError("path_loss_db: distance must be positive");
  if (!(f_hz > 0.0)) throw DomainError("path_loss_db: frequency must be positive");
  if (!(model.d_break_m > 0.0)) throw DomainError("path_loss_db: breakpoint must be positive");
  auto free_space = [f_hz](double d) { return 20.0 * std::log10(f_hz) + 20.0 * std::log10(d) - 147.5; };
  if (d_m <= model.d_break_m) return free_space(d_m);
  return free_space(model.d_break_m) + model.slope_after_break_db * std::log10(d_m / model.d_break_m);
}

RandomStream RandomStream::split(std::uint64_t key) const {
  return RandomStream(mix64(state_ ^ mix64(key * kGamma + 0x632BE59BD9B4E019ULL)));
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RandomStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

Complex RandomStream::circular_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

double sample_shadow_db(double d_m, RandomStream& rng, const PathLossModel& model) {
  if (!(d_m > 0.0)) throw DomainError("sample_shadow_db: distance must be positive");
  const double sigma = d_m <= model.d_break_m ? model.sigma_shadow_before_db : model.sigma_shadow_after_db;
  return sigma * rng.normal();
}

double subcarrier_noise_variance(const ScenarioConfig& cfg) {
  const double dbm = cfg.noise_psd_dbm_per_hz + 10.0 * std::log10(cfg.bandwidth_hz / cfg.num_subcarriers);
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double total_noise_power_dbm(const ScenarioConfig& cfg) {
  return cfg.noise_psd_dbm_per_hz + 10.0 * std::log10(cfg.bandwidth_hz);
}

std::vector<double> tap_powers(const TappedDelayProfile& profile, double bandwidth_hz) {
  if (profile.num_taps < 1) throw DomainError("tap profile needs at least one tap");
  if (!(profile.rms_delay_spread_s > 0.0)) throw DomainError("delay spread must be positive");
  const double spacing = 1.0 / bandwidth_hz;
  std::vector<double> p(profile.num_taps);
  double total = 0.0;
  for (int l = 0; l < profile.num_taps; ++l) {
    p[l] = std::exp(-l * spacing / profile.rms_delay_spread_s);
    total += p[l];
  }
  for (double& v : p) v /= total;
  return p;
}

ChannelSet generate_channels(const ScenarioConfig& cfg, const PathLossModel& model,
                             const TappedDelayProfile& profile) {
  cfg.validate();
  const int n_sub = cfg.num_subcarriers;
  const auto pdp = tap_powers(profile, cfg.bandwidth_hz);
  const int taps = static_cast<int>(pdp.size());

  // twiddle[n * taps + l] = exp(-j 2 pi n l / N)
  std::vector<Complex> twiddle(static_cast<std::size_t>(n_sub) * taps);
  for (int n = 0; n < n_sub; ++n)
    for (int l = 0; l < taps; ++l) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(n) * l) % n_sub) / n_sub;
      twiddle[static_cast<std::size_t>(n) * taps + l] = std::polar(1.0, phase);
    }

  const RandomStream root(cfg.seed);
  ChannelSet out;
  out.noise_variance = subcarrier_noise_variance(cfg);
  out.H.resize(cfg.num_users);
  std::vector<Complex> h(taps);
  for (int u = 0; u < cfg.num_users; ++u) {
    const RandomStream user_stream = root.split(static_cast<std::uint64_t>(u));
    RandomStream shadow_stream = user_stream.split(0);
    const double d = cfg.distance_of(u);
    const double loss_db = path_loss_db(d, cfg.center_freq_hz, model) + sample_shadow_db(d, shadow_stream, model);
    const double amplitude = std::pow(10.0, -loss_db / 20.0);
    const int lx = cfg.antennas_of(u);
    out.H[u].assign(n_sub, CMatrix::Zero(cfg.ap_antennas, lx));
    for (int a = 0; a < cfg.ap_antennas; ++a) {
      for (int j = 0; j < lx; ++j) {
        RandomStream link = user_stream.split(1).split(static_cast<std::uint64_t>(a)).split(static_cast<std::uint64_t>(j));
        for (int l = 0; l < taps; ++l) h[l] = std::sqrt(pdp[l]) * link.circular_normal();
        for (int n = 0; n < n_sub; ++n) {
          Complex acc{0.0, 0.0};
          for (int l = 0; l < taps; ++l) acc += h[l] * twiddle[static_cast<std::size_t>(n) * taps + l];
          out.H[u][n](a, j) = amplitude * acc;
        }
      }
    }
  }
  return out;
}

}  // namespace lrmac
