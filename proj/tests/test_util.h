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

#ifndef NBNOMA_TESTS_TEST_UTIL_H_
#define NBNOMA_TESTS_TEST_UTIL_H_

#include <vector>

#include "nbnoma/scenario.h"

namespace nbnoma::testing {

struct DeviceSpec {
  DeviceKind kind = DeviceKind::kMmtc;
  std::vector<double> gains;
  double threshold = 0.0;
  double budget = 1.0;
};

// Hand-built scenario. URLLC specs must come first. The noise power per tone
// N0 W is `noise_power`; the resource block is exactly S W wide.
inline Scenario MakeScenario(const std::vector<DeviceSpec>& specs,
                             int num_clusters, int max_rank,
                             double bandwidth = 1.0, double noise_power = 1.0) {
  ScenarioConfig config;
  config.num_urllc = 0;
  config.num_mmtc = 0;
  for (const DeviceSpec& s : specs) {
    (s.kind == DeviceKind::kUrllc ? config.num_urllc : config.num_mmtc)++;
  }
  config.num_subcarriers = static_cast<int>(specs.front().gains.size());
  config.num_clusters = num_clusters;
  config.max_rank = max_rank;
  config.subcarrier_bandwidth = bandwidth;
  config.rb_bandwidth = bandwidth * config.num_subcarriers;
  config.noise_psd = noise_power / bandwidth;
  std::vector<Device> devices;
  for (size_t i = 0; i < specs.size(); ++i) {
    Device d;
    d.id = static_cast<int>(i);
    d.kind = specs[i].kind;
    d.gains = specs[i].gains;
    d.rate_threshold = specs[i].threshold;
    d.power_budget = specs[i].budget;
    devices.push_back(d);
  }
  return Scenario(config, devices);
}

inline DeviceSpec Urllc(std::vector<double> gains, double threshold = 0.0,
                        double budget = 1.0) {
  return {DeviceKind::kUrllc, std::move(gains), threshold, budget};
}

inline DeviceSpec Mmtc(std::vector<double> gains, double threshold = 0.0,
                       double budget = 1.0) {
  return {DeviceKind::kMmtc, std::move(gains), threshold, budget};
}

// Small generated cell with reference physics.
inline ScenarioConfig SmallConfig(int urllc, int mmtc, int subcarriers,
                                  int max_rank, uint64_t seed) {
  ScenarioConfig c;
  c.num_urllc = urllc;
  c.num_mmtc = mmtc;
  c.num_subcarriers = subcarriers;
  c.max_rank = max_rank;
  c.num_clusters = (urllc + mmtc + max_rank - 1) / max_rank;
  c.rng_seed = seed;
  return c;
}

}  // namespace nbnoma::testing

#endif  // NBNOMA_TESTS_TEST_UTIL_H_
