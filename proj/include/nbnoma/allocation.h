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

#ifndef NBNOMA_ALLOCATION_H_
#define NBNOMA_ALLOCATION_H_

#include <span>
#include <vector>

#include "nbnoma/rate_model.h"
#include "nbnoma/scenario.h"

namespace nbnoma {

// One iteration of the greedy loop.
struct AllocationStep {
  int subcarrier = 0;
  int cluster = 0;
  // False while some device is below its threshold (only clusters holding an
  // unsatisfied device compete); true once every device is satisfied.
  bool all_satisfied = false;
  std::vector<bool> satisfied;  // per device, after this step
};

struct AllocationResult {
  SubcarrierMap map;
  PowerMatrix powers;
  RateReport report;
  std::vector<AllocationStep> trace;
};

// Spreads each member's full budget evenly over the owned subcarriers:
// p = P_max / |owned| there, 0 elsewhere. `owned` must be nonempty.
PowerMatrix EqualSplit(const Scenario& scenario, PowerMatrix powers,
                       std::span<const int> members, std::span<const int> owned);

// Greedy subcarrier-to-cluster allocation. Subcarriers are visited in index
// order; each goes to the candidate cluster whose sum rate gains the most
// when the subcarrier joins it, with every member's budget re-split evenly
// over the cluster's enlarged tone set. While some device is below its rate
// threshold only clusters holding such a device are candidates; afterwards
// every nonempty cluster is. Ties go to the lowest cluster index. All
// subcarriers are allocated.
//
// Throws kInvalidAssignment if `assignment` fails CheckStructure or does not
// match the scenario's cluster count.
AllocationResult Allocate(const Scenario& scenario,
                          const ClusterAssignment& assignment);

}  // namespace nbnoma

#endif  // NBNOMA_ALLOCATION_H_
