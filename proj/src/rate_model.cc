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

#include "nbnoma/rate_model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nbnoma/error.h"

namespace nbnoma {
namespace {

constexpr double kBudgetSlack = 1e-12;

// Members of a cluster with empty slots dropped.
std::vector<int> Occupants(const std::vector<int>& slots) {
  std::vector<int> out;
  out.reserve(slots.size());
  for (int d : slots) {
    if (d != kEmptySlot) out.push_back(d);
  }
  return out;
}

std::string Describe(const char* what, int a) {
  std::ostringstream s;
  s << what << " " << a;
  return s.str();
}

// Per-device rates for the whole assignment, with DeviceRate's error rules
// applied to every device.
std::vector<double> AllRates(const Scenario& scenario,
                             const ClusterAssignment& assignment,
                             const SubcarrierMap& map,
                             const PowerMatrix& powers) {
  const int n = scenario.num_devices();
  const double noise = scenario.config().noise_power();
  const double bw = scenario.config().subcarrier_bandwidth;
  const std::vector<Slot> slots = LocateDevices(assignment, n);
  for (int d = 0; d < n; ++d) {
    if (slots[d].cluster == kUnassigned) {
      throw NomaError(ErrorCode::kUnassignedDevice,
                      Describe("no cluster holds device", d));
    }
    for (int s = 0; s < scenario.num_subcarriers(); ++s) {
      if (powers.at(d, s) > 0.0 && map.owner[s] != slots[d].cluster) {
        std::ostringstream msg;
        msg << "device " << d << " transmits on subcarrier " << s
            << " which its cluster does not own";
        throw NomaError(ErrorCode::kInconsistentPower, msg.str());
      }
    }
  }

  std::vector<double> rates(n, 0.0);
  std::vector<double> received, tone;
  for (int c = 0; c < assignment.num_clusters(); ++c) {
    const std::vector<int> members = Occupants(assignment.clusters[c]);
    received.resize(members.size());
    tone.resize(members.size());
    for (int s : map.OwnedBy(c)) {
      for (size_t k = 0; k < members.size(); ++k) {
        received[k] = scenario.gain(members[k], s) * powers.at(members[k], s);
      }
      SicToneRates(received, noise, bw, tone);
      for (size_t k = 0; k < members.size(); ++k) rates[members[k]] += tone[k];
    }
  }
  return rates;
}

}  // namespace

std::vector<Slot> LocateDevices(const ClusterAssignment& assignment,
                                int num_devices) {
  std::vector<Slot> slots(num_devices);
  for (int c = 0; c < assignment.num_clusters(); ++c) {
    const auto& members = assignment.clusters[c];
    for (size_t k = 0; k < members.size(); ++k) {
      const int d = members[k];
      if (d >= 0 && d < num_devices && slots[d].cluster == kUnassigned) {
        slots[d] = Slot{c, static_cast<int>(k) + 1};
      }
    }
  }
  return slots;
}

std::vector<int> SubcarrierMap::OwnedBy(int cluster) const {
  std::vector<int> out;
  for (size_t s = 0; s < owner.size(); ++s) {
    if (owner[s] == cluster) out.push_back(static_cast<int>(s));
  }
  return out;
}

double PowerMatrix::RowSum(int device) const {
  double sum = 0.0;
  for (double p : row(device)) sum += p;
  return sum;
}

void SicToneRates(std::span<const double> received, double noise_power,
                  double bandwidth, std::span<double> out) {
  double interference = 0.0;
  for (size_t k = received.size(); k-- > 0;) {
    out[k] = bandwidth * Log2OnePlus(received[k] / (noise_power + interference));
    interference += received[k];
  }
}

double DeviceRate(int device, const Scenario& scenario,
                  const ClusterAssignment& assignment, const SubcarrierMap& map,
                  const PowerMatrix& powers) {
  const std::vector<Slot> slots =
      LocateDevices(assignment, scenario.num_devices());
  if (device < 0 || device >= scenario.num_devices() ||
      slots[device].cluster == kUnassigned) {
    throw NomaError(ErrorCode::kUnassignedDevice,
                    Describe("no cluster holds device", device));
  }
  const int c = slots[device].cluster;
  for (int s = 0; s < scenario.num_subcarriers(); ++s) {
    if (powers.at(device, s) > 0.0 && map.owner[s] != c) {
      std::ostringstream msg;
      msg << "device " << device << " transmits on subcarrier " << s
          << " which its cluster does not own";
      throw NomaError(ErrorCode::kInconsistentPower, msg.str());
    }
  }

  const std::vector<int> members = Occupants(assignment.clusters[c]);
  const int rank_index = slots[device].rank - 1;
  const double noise = scenario.config().noise_power();
  const double bw = scenario.config().subcarrier_bandwidth;
  double rate = 0.0;
  for (int s : map.OwnedBy(c)) {
    double interference = 0.0;
    for (size_t k = rank_index + 1; k < members.size(); ++k) {
      interference += scenario.gain(members[k], s) * powers.at(members[k], s);
    }
    const double signal = scenario.gain(device, s) * powers.at(device, s);
    rate += bw * Log2OnePlus(signal / (noise + interference));
  }
  return rate;
}

RateReport MakeRateReport(const Scenario& scenario, std::vector<double> rates) {
  RateReport report;
  report.rate = std::move(rates);
  report.satisfied.assign(report.rate.size(), false);
  bool any_positive = false;
  for (size_t d = 0; d < report.rate.size(); ++d) {
    report.sum_rate += report.rate[d];
    any_positive = any_positive || report.rate[d] > 0.0;
    report.satisfied[d] =
        report.rate[d] >= scenario.device(static_cast<int>(d)).rate_threshold;
    if (report.satisfied[d]) ++report.satisfied_count;
  }
  if (any_positive) report.fairness = JainFairness(report.rate);
  return report;
}

RateReport ComputeRateReport(const Scenario& scenario,
                             const ClusterAssignment& assignment,
                             const SubcarrierMap& map,
                             const PowerMatrix& powers) {
  return MakeRateReport(scenario, AllRates(scenario, assignment, map, powers));
}

double JainFairness(std::span<const double> rates) {
  if (rates.empty()) {
    throw NomaError(ErrorCode::kDegenerateInput, "empty rate list");
  }
  double sum = 0.0, sum_sq = 0.0;
  for (double r : rates) {
    if (!(r >= 0.0)) {
      throw NomaError(ErrorCode::kDegenerateInput, "negative or NaN rate");
    }
    sum += r;
    sum_sq += r * r;
  }
  if (sum_sq == 0.0) {
    throw NomaError(ErrorCode::kDegenerateInput,
                    "fairness is undefined when every rate is zero");
  }
  return std::min(1.0, sum * sum / (static_cast<double>(rates.size()) * sum_sq));
}

std::vector<Violation> CheckStructure(const Scenario& scenario,
                                      const ClusterAssignment& assignment) {
  std::vector<Violation> out;
  const int n = scenario.num_devices();
  std::vector<int> seen(n, 0);

  for (int c = 0; c < assignment.num_clusters(); ++c) {
    const auto& slots = assignment.clusters[c];
    // Trailing empty slots are just unused ranks.
    size_t used = slots.size();
    while (used > 0 && slots[used - 1] == kEmptySlot) --used;

    if (static_cast<int>(used) > assignment.max_rank) {
      out.push_back({"C10", {c}, "cluster uses ranks beyond k_max"});
    }
    bool gap = false;
    bool mmtc_seen = false;
    int occupied = 0;
    for (size_t k = 0; k < used; ++k) {
      const int d = slots[k];
      const int rank = static_cast<int>(k) + 1;
      if (d == kEmptySlot) {
        gap = true;
        continue;
      }
      if (d < 0 || d >= n) {
        out.push_back({"C10", {c, rank}, "slot holds an unknown device id"});
        continue;
      }
      ++occupied;
      ++seen[d];
      const bool urllc = scenario.device(d).kind == DeviceKind::kUrllc;
      if (gap) {
        out.push_back({urllc ? "C7" : "C6", {c, rank, d},
                       "device placed above an unoccupied rank"});
      }
      if (urllc && mmtc_seen) {
        out.push_back({"C5", {c, rank, d},
                       "URLLC ranked after an mMTC in the same cluster"});
      }
      mmtc_seen = mmtc_seen || !urllc;
    }
    if (occupied == 1) {
      out.push_back({"C11", {c}, "cluster has a single member"});
    }
  }

  for (int d = 0; d < n; ++d) {
    if (seen[d] == 1) continue;
    const bool urllc = scenario.device(d).kind == DeviceKind::kUrllc;
    out.push_back({urllc ? "C9" : "C8", {d},
                   seen[d] == 0 ? "device is not placed"
                                : "device occupies more than one slot"});
  }
  return out;
}

std::vector<Violation> Validate(const Scenario& scenario,
                                const ClusterAssignment& assignment,
                                const SubcarrierMap& map,
                                const PowerMatrix& powers) {
  const ScenarioConfig& config = scenario.config();
  const int n = scenario.num_devices();
  const int num_sc = scenario.num_subcarriers();
  if (assignment.num_clusters() != config.num_clusters ||
      assignment.max_rank != config.max_rank ||
      static_cast<int>(map.owner.size()) != num_sc ||
      powers.num_devices() != n || powers.num_subcarriers() != num_sc) {
    return {{"SHAPE", {}, "inputs do not match the scenario dimensions"}};
  }

  std::vector<Violation> out = CheckStructure(scenario, assignment);

  int assigned = 0;
  for (int s = 0; s < num_sc; ++s) {
    const int c = map.owner[s];
    if (c == kUnassigned) continue;
    if (c < 0 || c >= assignment.num_clusters()) {
      out.push_back({"C12", {s}, "subcarrier owned by an unknown cluster"});
      continue;
    }
    ++assigned;
  }
  if (assigned * config.subcarrier_bandwidth >
      config.rb_bandwidth * (1.0 + kBudgetSlack)) {
    out.push_back({"C13", {}, "assigned bandwidth exceeds the RB"});
  }

  const std::vector<Slot> slots = LocateDevices(assignment, n);
  for (int d = 0; d < n; ++d) {
    const Device& dev = scenario.device(d);
    const bool urllc = dev.kind == DeviceKind::kUrllc;
    const int c = slots[d].cluster;
    for (int s = 0; s < num_sc; ++s) {
      const double p = powers.at(d, s);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        out.push_back({urllc ? "C15" : "C14", {d, s},
                       "negative or non-finite power"});
      } else if (p > 0.0 && (c == kUnassigned || map.owner[s] != c)) {
        out.push_back({"PWR", {d, s},
                       "power on a subcarrier its cluster does not own"});
      }
    }
    const double total = powers.RowSum(d);
    if (total > dev.power_budget * (1.0 + kBudgetSlack)) {
      out.push_back({urllc ? "C4" : "C2", {d}, "power budget exceeded"});
    } else if (urllc && c != kUnassigned && !map.OwnedBy(c).empty() &&
               total < dev.power_budget * (1.0 - 1e-9)) {
      out.push_back({"C4", {d}, "URLLC does not transmit its full budget"});
    }
  }
  return out;
}

double SicChainGap(const Scenario& scenario,
                   const ClusterAssignment& assignment,
                   const SubcarrierMap& map, const PowerMatrix& powers) {
  const double noise = scenario.config().noise_power();
  double worst = 0.0;
  std::vector<double> received, tone;
  for (int c = 0; c < assignment.num_clusters(); ++c) {
    const std::vector<int> members = Occupants(assignment.clusters[c]);
    if (members.empty()) continue;
    received.resize(members.size());
    tone.resize(members.size());
    for (int s : map.OwnedBy(c)) {
      double total = 0.0;
      bool all_active = true;
      for (size_t k = 0; k < members.size(); ++k) {
        received[k] = scenario.gain(members[k], s) * powers.at(members[k], s);
        all_active = all_active && received[k] > 0.0;
        total += received[k];
      }
      if (!all_active) continue;
      SicToneRates(received, noise, 1.0, tone);
      double chain = 0.0;
      for (double r : tone) chain += r;
      const double closed = std::log1p(total / noise) / std::numbers::ln2;
      worst = std::max(worst, std::abs(chain - closed) / closed);
    }
  }
  return worst;
}

}  // namespace nbnoma
