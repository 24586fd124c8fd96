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

#include "nbnoma/scenario.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "nbnoma/error.h"
#include "nbnoma/random.h"

namespace nbnoma {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw NomaError(ErrorCode::kInvalidConfig, what);
}

bool PositiveFinite(double v) { return std::isfinite(v) && v > 0.0; }

void CheckRange(const RateRange& range, const char* name) {
  Require(std::isfinite(range.min_bps) && std::isfinite(range.max_bps) &&
              range.min_bps >= 0.0 && range.min_bps <= range.max_bps,
          std::string(name) + " must satisfy 0 <= min <= max");
}

}  // namespace

const char* DeviceKindName(DeviceKind kind) {
  return kind == DeviceKind::kUrllc ? "urllc" : "mmtc";
}

void ValidateConfig(const ScenarioConfig& c) {
  Require(c.num_urllc >= 0 && c.num_mmtc >= 0,
          "num_urllc and num_mmtc must be >= 0");
  Require(c.num_devices() >= 1, "at least one device is required");
  Require(c.num_subcarriers >= 1, "num_subcarriers must be >= 1");
  Require(c.num_clusters >= 1, "num_clusters must be >= 1");
  Require(c.max_rank >= 2, "max_rank must be >= 2");
  Require(static_cast<long>(c.num_devices()) <=
              static_cast<long>(c.num_clusters) * c.max_rank,
          "num_urllc + num_mmtc must not exceed num_clusters * max_rank");
  Require(PositiveFinite(c.subcarrier_bandwidth),
          "subcarrier_bandwidth must be > 0");
  Require(PositiveFinite(c.rb_bandwidth), "rb_bandwidth must be > 0");
  Require(c.num_subcarriers * c.subcarrier_bandwidth <=
              c.rb_bandwidth * (1.0 + 1e-12),
          "num_subcarriers * subcarrier_bandwidth must not exceed "
          "rb_bandwidth");
  Require(PositiveFinite(c.cell_radius), "cell_radius must be > 0");
  Require(PositiveFinite(c.min_distance), "min_distance must be > 0");
  Require(c.min_distance <= c.cell_radius,
          "min_distance must not exceed cell_radius");
  Require(PositiveFinite(c.pathloss_exponent),
          "pathloss_exponent must be > 0");
  Require(PositiveFinite(c.noise_psd), "noise_psd must be > 0");
  Require(PositiveFinite(c.power_budget_urllc),
          "power_budget_urllc must be > 0");
  Require(PositiveFinite(c.power_budget_mmtc), "power_budget_mmtc must be > 0");
  CheckRange(c.urllc_rate_threshold_range, "urllc_rate_threshold_range");
  CheckRange(c.mmtc_rate_threshold_range, "mmtc_rate_threshold_range");
}

Scenario::Scenario(ScenarioConfig config, std::vector<Device> devices)
    : config_(std::move(config)), devices_(std::move(devices)) {
  ValidateConfig(config_);
  Require(num_devices() == config_.num_devices(),
          "device list size does not match num_urllc + num_mmtc");
  for (int i = 0; i < num_devices(); ++i) {
    const Device& d = devices_[i];
    std::ostringstream where;
    where << "device " << i;
    Require(d.id == i, where.str() + " has a non-sequential id");
    const DeviceKind expected =
        i < config_.num_urllc ? DeviceKind::kUrllc : DeviceKind::kMmtc;
    Require(d.kind == expected, where.str() + " has the wrong kind");
    Require(static_cast<int>(d.gains.size()) == config_.num_subcarriers,
            where.str() + " must have one gain per subcarrier");
    for (double g : d.gains) {
      Require(PositiveFinite(g), where.str() + " has a non-positive gain");
    }
    Require(std::isfinite(d.rate_threshold) && d.rate_threshold >= 0.0,
            where.str() + " has a negative rate threshold");
    Require(PositiveFinite(d.power_budget),
            where.str() + " has a non-positive power budget");
  }
}

Scenario GenerateScenario(const ScenarioConfig& config) {
  ValidateConfig(config);
  Rng rng(config.rng_seed);
  const double r_min2 = config.min_distance * config.min_distance;
  const double r_max2 = config.cell_radius * config.cell_radius;

  std::vector<Device> devices;
  devices.reserve(config.num_devices());
  for (int id = 0; id < config.num_devices(); ++id) {
    Device d;
    d.id = id;
    d.kind = id < config.num_urllc ? DeviceKind::kUrllc : DeviceKind::kMmtc;
    d.distance = std::sqrt(r_min2 + rng.Uniform01() * (r_max2 - r_min2));
    d.distance = std::clamp(d.distance, config.min_distance, config.cell_radius);
    rng.Uniform(0.0, 2.0 * std::numbers::pi);  // angle; geometry is radial
    d.gains.resize(config.num_subcarriers);
    for (double& g : d.gains) {
      g = PathGain(d.distance, config.pathloss_exponent, rng.Exponential());
    }
    const RateRange& range = d.kind == DeviceKind::kUrllc
                                 ? config.urllc_rate_threshold_range
                                 : config.mmtc_rate_threshold_range;
    d.rate_threshold = rng.Uniform(range.min_bps, range.max_bps);
    d.power_budget = d.kind == DeviceKind::kUrllc ? config.power_budget_urllc
                                                  : config.power_budget_mmtc;
    devices.push_back(std::move(d));
  }
  return Scenario(config, std::move(devices));
}

Scenario SplitTones(const Scenario& scenario) {
  ScenarioConfig config = scenario.config();
  config.num_subcarriers *= 2;
  config.subcarrier_bandwidth /= 2.0;
  std::vector<Device> devices = scenario.devices();
  for (Device& d : devices) {
    std::vector<double> split;
    split.reserve(d.gains.size() * 2);
    for (double g : d.gains) {
      split.push_back(g);
      split.push_back(g);
    }
    d.gains = std::move(split);
  }
  return Scenario(std::move(config), std::move(devices));
}

}  // namespace nbnoma
