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

#include "nbnoma/allocation.h"

#include <numeric>
#include <sstream>

#include "nbnoma/error.h"

namespace nbnoma {
namespace {

// Member rates of one cluster transmitting on `tones` with equal-split power.
std::vector<double> ClusterRates(const Scenario& scenario,
                                 const std::vector<int>& members,
                                 const std::vector<int>& tones) {
  std::vector<double> rates(members.size(), 0.0);
  if (tones.empty()) return rates;
  const double noise = scenario.config().noise_power();
  const double bw = scenario.config().subcarrier_bandwidth;
  const double share = 1.0 / static_cast<double>(tones.size());
  std::vector<double> received(members.size()), tone(members.size());
  for (int s : tones) {
    for (size_t k = 0; k < members.size(); ++k) {
      const Device& d = scenario.device(members[k]);
      received[k] = d.gains[s] * d.power_budget * share;
    }
    SicToneRates(received, noise, bw, tone);
    for (size_t k = 0; k < members.size(); ++k) rates[k] += tone[k];
  }
  return rates;
}

double Sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

PowerMatrix EqualSplit(const Scenario& scenario, PowerMatrix powers,
                       std::span<const int> members,
                       std::span<const int> owned) {
  if (owned.empty()) {
    throw NomaError(ErrorCode::kDegenerateInput,
                    "equal split needs at least one owned subcarrier");
  }
  for (int d : members) {
    const double share =
        scenario.device(d).power_budget / static_cast<double>(owned.size());
    for (int s = 0; s < powers.num_subcarriers(); ++s) powers.at(d, s) = 0.0;
    for (int s : owned) powers.at(d, s) = share;
  }
  return powers;
}

AllocationResult Allocate(const Scenario& scenario,
                          const ClusterAssignment& assignment) {
  if (assignment.num_clusters() != scenario.config().num_clusters ||
      assignment.max_rank != scenario.config().max_rank) {
    throw NomaError(ErrorCode::kInvalidAssignment,
                    "assignment does not match the scenario's cluster layout");
  }
  if (const auto v = CheckStructure(scenario, assignment); !v.empty()) {
    throw NomaError(ErrorCode::kInvalidAssignment,
                    v.front().constraint + ": " + v.front().detail);
  }

  const int num_clusters = assignment.num_clusters();
  const int n = scenario.num_devices();
  std::vector<std::vector<int>> members(num_clusters);
  for (int c = 0; c < num_clusters; ++c) {
    for (int d : assignment.clusters[c]) {
      if (d != kEmptySlot) members[c].push_back(d);
    }
  }
  std::vector<std::vector<int>> tones(num_clusters);
  std::vector<std::vector<double>> rates(num_clusters);
  for (int c = 0; c < num_clusters; ++c) {
    rates[c].assign(members[c].size(), 0.0);
  }
  std::vector<bool> satisfied(n);
  auto refresh = [&](int c) {
    for (size_t k = 0; k < members[c].size(); ++k) {
      const int d = members[c][k];
      satisfied[d] = rates[c][k] >= scenario.device(d).rate_threshold;
    }
  };
  for (int c = 0; c < num_clusters; ++c) refresh(c);

  AllocationResult result;
  for (int s = 0; s < scenario.num_subcarriers(); ++s) {
    bool all_satisfied = true;
    for (int d = 0; d < n && all_satisfied; ++d) all_satisfied = satisfied[d];

    int best = -1;
    double best_gain = 0.0;
    std::vector<double> best_rates;
    for (int c = 0; c < num_clusters; ++c) {
      if (members[c].empty()) continue;
      if (!all_satisfied) {
        bool needs = false;
        for (int d : members[c]) needs = needs || !satisfied[d];
        if (!needs) continue;
      }
      std::vector<int> candidate = tones[c];
      candidate.push_back(s);
      std::vector<double> trial = ClusterRates(scenario, members[c], candidate);
      const double gain = Sum(trial) - Sum(rates[c]);
      if (best < 0 || gain > best_gain) {
        best = c;
        best_gain = gain;
        best_rates = std::move(trial);
      }
    }
    if (best < 0) break;  // no device at all

    tones[best].push_back(s);
    rates[best] = std::move(best_rates);
    refresh(best);
    result.trace.push_back({s, best, all_satisfied, satisfied});
  }

  result.map.owner.assign(scenario.num_subcarriers(), kUnassigned);
  result.powers = PowerMatrix(n, scenario.num_subcarriers());
  for (int c = 0; c < num_clusters; ++c) {
    for (int s : tones[c]) result.map.owner[s] = c;
    if (!tones[c].empty()) {
      result.powers =
          EqualSplit(scenario, std::move(result.powers), members[c], tones[c]);
    }
  }
  result.report =
      ComputeRateReport(scenario, assignment, result.map, result.powers);
  return result;
}

}  // namespace nbnoma
