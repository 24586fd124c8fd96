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

#ifndef NBNOMA_ORACLE_H_
#define NBNOMA_ORACLE_H_

#include <span>
#include <vector>

#include "nbnoma/power_opt.h"
#include "nbnoma/rate_model.h"
#include "nbnoma/scenario.h"

namespace nbnoma {

// Brute-force references for tiny instances. Each throws
// kInstanceTooLarge outside its stated bounds.

inline constexpr int kMckpMaxSubcarriers = 12;
inline constexpr int kMckpMaxClusters = 4;

struct MckpResult {
  SubcarrierMap map;
  double objective = 0.0;  // bps, total sum rate
  long long maps_evaluated = 0;
};

// Best subcarrier-to-cluster map for a fixed clustering, by enumerating all
// C^S maps in lexicographic order (subcarrier 0 most significant). Members
// split their budget evenly over their cluster's subcarriers, as in the
// greedy allocator. Ties keep the lexicographically smallest map.
MckpResult MckpOracle(const Scenario& scenario,
                      const ClusterAssignment& assignment);

// Same enumeration with a fixed power matrix: a device transmits
// powers.at(d, s) whenever subcarrier s belongs to its cluster.
MckpResult MckpOracle(const Scenario& scenario,
                      const ClusterAssignment& assignment,
                      const PowerMatrix& powers);

inline constexpr int kExhaustiveMaxDevices = 5;
inline constexpr int kExhaustiveMaxClusters = 2;
inline constexpr int kExhaustiveMaxRank = 3;
inline constexpr int kExhaustiveMaxSubcarriers = 6;

struct ExhaustiveResult {
  ClusterAssignment assignment;
  SubcarrierMap map;
  PowerMatrix powers;
  RateReport report;
  double objective = 0.0;  // bps
  long long assignments_evaluated = 0;
};

// Global optimum over every structurally valid clustering (CheckStructure
// clean, scenario's C and k_max) combined with its MCKP-optimal map. Clusters
// may stay empty. Ties keep the first clustering enumerated: placements in
// lexicographic order of (cluster of device 0, cluster of device 1, ...),
// then member orders per cluster in std::next_permutation order.
ExhaustiveResult ExhaustiveClustering(const Scenario& scenario);

inline constexpr int kGridMaxUsers = 3;

struct GridPowerResult {
  std::vector<double> powers;  // W
  std::vector<double> z;       // W
  double objective = 0.0;      // bps
  long long points_feasible = 0;
};

// Sum rate of an ordered cluster evaluated directly from powers:
//   sum_j B log2(1 + lambda_j P_j / (1 + lambda_j sum_{l>j} P_l)).
double DirectOrderedSumRate(std::span<const double> powers,
                            const OrderedCluster& cluster);

// Grid search over Z with Z_0 = P_max and Z_1, Z_2 on multiples of `step`.
// Feasibility is the constraint set of SatisfiesConstraints at 1e-12. Throws
// kNoFeasibleGridPoint when no grid point is feasible.
GridPowerResult GridPowerOracle(const OrderedCluster& cluster, double step);

}  // namespace nbnoma

#endif  // NBNOMA_ORACLE_H_
