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

#ifndef NBNOMA_SELF_CHECK_H_
#define NBNOMA_SELF_CHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nbnoma/power_opt.h"
#include "nbnoma/random.h"
#include "nbnoma/scenario.h"

namespace nbnoma {

// True if n devices fit into at most `clusters` clusters of 2..max_rank
// members each (empty clusters allowed).
bool HasValidClustering(int n, int clusters, int max_rank);

// A random instance small enough for the exhaustive oracles: 2..5 devices,
// C <= 2, k_max in {2, 3}, 1..6 subcarriers, redrawn until
// HasValidClustering holds. Physical parameters come from
// `base`.
ScenarioConfig RandomTinyConfig(const ScenarioConfig& base, Rng& rng);

// A random cluster with 1..max_users users whose feasible set has a minimum
// slack of at least 1e-3 P_max. lambda * P_max is log-uniform in [0.1, 1e4];
// thresholds are random fractions of the equal-power rates.
OrderedCluster RandomFeasibleCluster(Rng& rng, int max_users);

struct CheckOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string detail;  // first failure, or a short summary

  bool passed() const { return failures == 0 && cases > 0; }
};

// Oracle and invariant checks on `instances` random tiny instances:
// MCKP and exhaustive dominance over the heuristics, constraint validation of
// every produced allocation, SIC chain conservation, power solver vs grid
// search, and the Z-space identity.
std::vector<CheckOutcome> RunSelfChecks(const ScenarioConfig& base,
                                        int instances, uint64_t seed);

}  // namespace nbnoma

#endif  // NBNOMA_SELF_CHECK_H_
