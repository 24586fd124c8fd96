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

#include "nbnoma/baselines.h"

#include <cmath>

#include "nbnoma/units.h"

namespace nbnoma {
namespace {

double OwnRate(const Device& d, const std::vector<int>& tones, double noise,
               double bandwidth) {
  if (tones.empty()) return 0.0;
  const double share = d.power_budget / static_cast<double>(tones.size());
  double rate = 0.0;
  for (int s : tones) rate += bandwidth * Log2OnePlus(d.gains[s] * share / noise);
  return rate;
}

}  // namespace

OrthogonalResult OfdmaAllocate(const Scenario& scenario) {
  const int n = scenario.num_devices();
  const int num_tones = scenario.num_subcarriers();
  const double noise = scenario.config().noise_power();
  const double bw = scenario.config().subcarrier_bandwidth;

  std::vector<std::vector<int>> tones(n);
  std::vector<double> rate(n, 0.0);
  std::vector<bool> satisfied(n);
  for (int d = 0; d < n; ++d) {
    satisfied[d] = scenario.device(d).rate_threshold <= 0.0;
  }

  OrthogonalResult out;
  out.num_subcarriers = num_tones;
  out.subcarrier_bandwidth = bw;
  out.owner.assign(num_tones, kUnassigned);
  for (int s = 0; s < num_tones && n > 0; ++s) {
    int best = -1;
    for (int pass = 0; pass < 2 && best < 0; ++pass) {
      for (int d = 0; d < n; ++d) {
        if (pass == 0 && satisfied[d]) continue;
        if (best < 0 || scenario.gain(d, s) > scenario.gain(best, s)) best = d;
      }
    }
    out.owner[s] = best;
    tones[best].push_back(s);
    const Device& dev = scenario.device(best);
    rate[best] = OwnRate(dev, tones[best], noise, bw);
    satisfied[best] = rate[best] >= dev.rate_threshold;
  }

  out.powers = PowerMatrix(n, num_tones);
  for (int d = 0; d < n; ++d) {
    if (tones[d].empty()) continue;
    const double share =
        scenario.device(d).power_budget / static_cast<double>(tones[d].size());
    for (int s : tones[d]) out.powers.at(d, s) = share;
  }
  out.report = MakeRateReport(scenario, std::move(rate));
  return out;
}

OrthogonalResult FastOfdmAllocate(const Scenario& scenario) {
  return OfdmaAllocate(SplitTones(scenario));
}

std::vector<Violation> ValidateOrthogonal(const Scenario& scenario,
                                          const OrthogonalResult& result) {
  std::vector<Violation> out;
  const int n = scenario.num_devices();
  const int num_tones = result.num_subcarriers;
  if (static_cast<int>(result.owner.size()) != num_tones ||
      result.powers.num_devices() != n ||
      result.powers.num_subcarriers() != num_tones) {
    out.push_back({"SHAPE", {}, "result dimensions disagree"});
    return out;
  }
  const double total_bw = num_tones * result.subcarrier_bandwidth;
  if (total_bw > scenario.config().rb_bandwidth * (1.0 + 1e-12)) {
    out.push_back({"C13", {}, "tones exceed the resource block"});
  }
  for (int s = 0; s < num_tones; ++s) {
    const int owner = result.owner[s];
    if (owner != kUnassigned && (owner < 0 || owner >= n)) {
      out.push_back({"C12", {s}, "subcarrier owned by an unknown device"});
    }
    int transmitting = 0;
    for (int d = 0; d < n; ++d) {
      const double p = result.powers.at(d, s);
      if (!std::isfinite(p) || p < 0.0) {
        out.push_back({"C14", {d, s}, "negative or non-finite power"});
      } else if (p > 0.0) {
        ++transmitting;
        if (d != owner) {
          out.push_back({"PWR", {d, s}, "power on a subcarrier it does not own"});
        }
      }
    }
    if (transmitting > 1) {
      out.push_back({"C12", {s}, "subcarrier shared by several devices"});
    }
  }
  for (int d = 0; d < n; ++d) {
    const double budget = scenario.device(d).power_budget;
    if (result.powers.RowSum(d) > budget * (1.0 + 1e-12)) {
      out.push_back({"C2", {d}, "device exceeds its power budget"});
    }
  }
  return out;
}

}  // namespace nbnoma
