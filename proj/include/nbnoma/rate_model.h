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

#ifndef NBNOMA_RATE_MODEL_H_
#define NBNOMA_RATE_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nbnoma/scenario.h"

namespace nbnoma {

inline constexpr int kUnassigned = -1;
inline constexpr int kEmptySlot = -1;

// Placement of every device into (cluster, rank) slots. clusters[c] lists the
// members of cluster c in SIC decoding order: index 0 is rank 1, decoded
// first. A kEmptySlot entry stands for an unoccupied rank and only appears in
// hand-built (usually invalid) assignments.
struct ClusterAssignment {
  std::vector<std::vector<int>> clusters;
  int max_rank = 2;

  int num_clusters() const { return static_cast<int>(clusters.size()); }
};

struct Slot {
  int cluster = kUnassigned;
  int rank = 0;  // 1-based
};

// Slot of every device id in [0, num_devices); unplaced devices get
// cluster == kUnassigned. Ids outside the range are ignored.
std::vector<Slot> LocateDevices(const ClusterAssignment& assignment,
                                int num_devices);

// Subcarrier -> owning cluster (or kUnassigned).
struct SubcarrierMap {
  std::vector<int> owner;

  std::vector<int> OwnedBy(int cluster) const;
};

// Transmit power in W per (device, subcarrier).
class PowerMatrix {
 public:
  PowerMatrix() = default;
  PowerMatrix(int num_devices, int num_subcarriers)
      : rows_(num_devices),
        cols_(num_subcarriers),
        data_(static_cast<size_t>(num_devices) * num_subcarriers, 0.0) {}

  int num_devices() const { return rows_; }
  int num_subcarriers() const { return cols_; }
  double& at(int device, int subcarrier) {
    return data_[static_cast<size_t>(device) * cols_ + subcarrier];
  }
  double at(int device, int subcarrier) const {
    return data_[static_cast<size_t>(device) * cols_ + subcarrier];
  }
  std::span<const double> row(int device) const {
    return {data_.data() + static_cast<size_t>(device) * cols_,
            static_cast<size_t>(cols_)};
  }
  double RowSum(int device) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

struct RateReport {
  std::vector<double> rate;      // bps, by device id
  double sum_rate = 0.0;         // bps
  std::optional<double> fairness;  // Jain index; empty when every rate is 0
  int satisfied_count = 0;
  std::vector<bool> satisfied;   // rate >= threshold, by device id
};

// Rates of the members of one tone in SIC order. received[k] is the received
// power |h|^2 p of the rank-(k+1) member; the rank-k member sees the members
// after it as interference:
//   out[k] = bandwidth * log2(1 + received[k] / (noise_power + sum_{l>k} received[l]))
void SicToneRates(std::span<const double> received, double noise_power,
                  double bandwidth, std::span<double> out);

// Aggregate rate of one device over the subcarriers owned by its cluster.
// Throws kUnassignedDevice / kInconsistentPower.
double DeviceRate(int device, const Scenario& scenario,
                  const ClusterAssignment& assignment, const SubcarrierMap& map,
                  const PowerMatrix& powers);

RateReport ComputeRateReport(const Scenario& scenario,
                             const ClusterAssignment& assignment,
                             const SubcarrierMap& map,
                             const PowerMatrix& powers);

// Builds a report from precomputed per-device rates.
RateReport MakeRateReport(const Scenario& scenario, std::vector<double> rates);

// (sum r)^2 / (n sum r^2). Throws kDegenerateInput for an empty list, a
// negative entry, or all-zero rates.
double JainFairness(std::span<const double> rates);

struct Violation {
  std::string constraint;  // "C2", "C4".."C15", "PWR" or "SHAPE"
  std::vector<int> indices;
  std::string detail;
};

// Structural constraints C5-C11 of a clustering (plus the k_max bound,
// reported under C10).
std::vector<Violation> CheckStructure(const Scenario& scenario,
                                      const ClusterAssignment& assignment);

// Every structural constraint of a full allocation: C2, C4-C15, the shape of
// the inputs and the rule that power is only spent on subcarriers owned by
// the device's cluster ("PWR"). Rate thresholds are not checked here; they
// live in RateReport.
std::vector<Violation> Validate(const Scenario& scenario,
                                const ClusterAssignment& assignment,
                                const SubcarrierMap& map,
                                const PowerMatrix& powers);

// Largest relative gap, over every owned (cluster, subcarrier) on which all
// members transmit, between the summed SIC rates and the closed-form
// W log2(1 + sum_j |h_j|^2 p_j / (N0 W)). Returns 0 when nothing qualifies.
double SicChainGap(const Scenario& scenario,
                   const ClusterAssignment& assignment,
                   const SubcarrierMap& map, const PowerMatrix& powers);

}  // namespace nbnoma

#endif  // NBNOMA_RATE_MODEL_H_
