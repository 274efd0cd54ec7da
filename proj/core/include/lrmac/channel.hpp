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

#include <cstdint>
#include <vector>

#include "lrmac/types.hpp"

namespace lrmac {

struct ScenarioConfig {
  int num_users = 3;
  // One entry per user; empty means one antenna for every user.
  std::vector<int> antennas_per_user;
  int ap_antennas = 2;
  int num_subcarriers = 64;
  double bandwidth_hz = 80e6;
  double center_freq_hz = 5e9;
  // One entry per user; empty means every user at 3 m.
  std::vector<double> distances_m;
  double noise_psd_dbm_per_hz = -174.0;
  std::uint64_t seed = 1;

  int antennas_of(int u) const {
    return antennas_per_user.empty() ? 1 : antennas_per_user[u];
  }
  double distance_of(int u) const { return distances_m.empty() ? 3.0 : distances_m[u]; }

  // Throws DomainError on U < 1, L_y < 1, N < 1, W <= 0, f <= 0, a distance
  // <= 0 or a per-user list of the wrong length.
  void validate() const;
};

// Indoor path-loss with a breakpoint and distance-dependent shadowing.
struct PathLossModel {
  double d_break_m = 5.0;
  double slope_after_break_db = 35.0;
  double sigma_shadow_before_db = 3.0;
  double sigma_shadow_after_db = 4.0;
};

// Synthetic small-scale fading: taps spaced 1/W apart with an exponential
// power-delay profile normalized to unit power.
struct TappedDelayProfile {
  int num_taps = 8;
  double rms_delay_spread_s = 30e-9;
};

// Deterministic path loss in dB (shadowing excluded). Beyond the breakpoint
// the loss grows by slope_after_break_db per decade from its breakpoint value.
double path_loss_db(double d_m, double f_hz, const PathLossModel& model = {});

// Splittable counter-based stream: every (seed, key...) tuple maps to an
// independent, order-insensitive substream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}
  RandomStream split(std::uint64_t key) const;

  std::uint64_t next_u64();
  // Uniform in (0, 1).
  double uniform();
  double normal();
  Complex circular_normal();  // E|z|^2 = 1

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Zero-mean Gaussian shadowing in dB; std is sigma_shadow_before_db up to the
// breakpoint and sigma_shadow_after_db beyond it.
double sample_shadow_db(double d_m, RandomStream& rng, const PathLossModel& model = {});

// Linear noise power per subcarrier in watts.
double subcarrier_noise_variance(const ScenarioConfig& cfg);
double total_noise_power_dbm(const ScenarioConfig& cfg);

// Exponential PDP tap powers, normalized to sum one.
std::vector<double> tap_powers(const TappedDelayProfile& profile, double bandwidth_hz);

ChannelSet generate_channels(const ScenarioConfig& cfg, const PathLossModel& model = {},
                             const TappedDelayProfile& profile = {});

}  // namespace lrmac
