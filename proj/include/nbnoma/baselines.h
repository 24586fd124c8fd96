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

#ifndef NBNOMA_BASELINES_H_
#define NBNOMA_BASELINES_H_

#include <string>
#include <vector>

#include "nbnoma/rate_model.h"
#include "nbnoma/scenario.h"

namespace nbnoma {

// Orthogonal allocation: every subcarrier serves at most one device.
struct OrthogonalResult {
  std::vector<int> owner;  // subcarrier -> device id, or kUnassigned
  PowerMatrix powers;
  RateReport report;
  int num_subcarriers = 0;
  double subcarrier_bandwidth = 0.0;  // Hz
};

// OFDMA baseline. Subcarriers are visited in index order; each goes to the
// unsatisfied device with the highest gain on it, or to the highest-gain
// device overall once nobody is unsatisfied. Ties go to the lower id. A
// device splits its budget evenly over what it owns and sees no
// interference.
OrthogonalResult OfdmaAllocate(const Scenario& scenario);

// Fast-OFDM baseline: OFDMA on SplitTones(scenario), i.e. 2S half-width
// tones with each gain duplicated onto both halves.
OrthogonalResult FastOfdmAllocate(const Scenario& scenario);

// Structural problems of an orthogonal result: exclusivity, budgets, power
// on unowned tones, bandwidth. Empty when the result is valid.
std::vector<Violation> ValidateOrthogonal(const Scenario& scenario,
                                          const OrthogonalResult& result);

}  // namespace nbnoma

#endif  // NBNOMA_BASELINES_H_
