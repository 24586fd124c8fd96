// Copyright 2026 The nbnoma Authors
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

#ifndef NBNOMA_SCENARIO_H_
#define NBNOMA_SCENARIO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nbnoma/units.h"

namespace nbnoma {

struct RateRange {
  double min_bps = 0.0;
  double max_bps = 0.0;
};

// Parameters of one cell instance. Defaults are the reference NB-IoT uplink
// setup: one 180 kHz RB split into 48 tones of 3.75 kHz, a 500 m cell,
// path-loss exponent 3, -173 dBm/Hz noise and 23 dBm device budgets.
struct ScenarioConfig {
  int num_urllc = 24;
  int num_mmtc = 72;
  int num_subcarriers = 48;
  int num_clusters = 48;
  int max_rank = 2;
  double subcarrier_bandwidth = 3750.0;  // Hz
  double rb_bandwidth = 180e3;           // Hz
  double cell_radius = 500.0;            // m
  double pathloss_exponent = 3.0;
  double noise_psd = DbmToWatts(-173.0);           // W/Hz
  double power_budget_urllc = DbmToWatts(23.0);    // W
  double power_budget_mmtc = DbmToWatts(23.0);     // W
  RateRange urllc_rate_threshold_range{100.0, 20e3};
  RateRange mmtc_rate_threshold_range{100.0, 2e3};
  double min_distance = 0.1;  // m
  uint64_t rng_seed = 1;

  int num_devices() const { return num_urllc + num_mmtc; }
  // N0 * W, the noise power on one tone.
  double noise_power() const { return noise_psd * subcarrier_bandwidth; }
};

// Throws NomaError(kInvalidConfig) naming the first violated invariant.
void ValidateConfig(const ScenarioConfig& config);

enum class DeviceKind { kUrllc, kMmtc };

const char* DeviceKindName(DeviceKind kind);

struct Device {
  int id = 0;
  DeviceKind kind = DeviceKind::kMmtc;
  double distance = 1.0;       // m
  std::vector<double> gains;   // linear power gain |h|^2 per subcarrier
  double rate_threshold = 0.0; // bps
  double power_budget = 0.0;   // W
};

// An immutable cell instance. Devices are ordered by id, URLLCs first.
class Scenario {
 public:
  // Validates the config and every device against it.
  Scenario(ScenarioConfig config, std::vector<Device> devices);

  const ScenarioConfig& config() const { return config_; }
  const std::vector<Device>& devices() const { return devices_; }
  const Device& device(int id) const { return devices_[id]; }
  int num_devices() const { return static_cast<int>(devices_.size()); }
  int num_subcarriers() const { return config_.num_subcarriers; }
  double gain(int device, int subcarrier) const {
    return devices_[device].gains[subcarrier];
  }

 private:
  ScenarioConfig config_;
  std::vector<Device> devices_;
};

// h = fading * distance^-exponent.
inline double PathGain(double distance, double exponent, double fading) {
  return fading * std::pow(distance, -exponent);
}

// Draws a cell instance from config.rng_seed. Draw order, per device in id
// order: radius, angle, one exponential fading draw per subcarrier in index
// order, then the rate threshold. Radii are uniform in area over the annulus
// [min_distance, cell_radius].
Scenario GenerateScenario(const ScenarioConfig& config);

// The same cell seen through a tone grid of 2S half-width tones; each
// original gain is duplicated onto its two halves.
Scenario SplitTones(const Scenario& scenario);

}  // namespace nbnoma

#endif  // NBNOMA_SCENARIO_H_
