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

#include "nbnoma/error.h"

namespace nbnoma {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kUnassignedDevice: return "unassigned-device";
    case ErrorCode::kInconsistentPower: return "inconsistent-power";
    case ErrorCode::kDegenerateInput: return "degenerate-input";
    case ErrorCode::kCapacityExceeded: return "capacity-exceeded";
    case ErrorCode::kSingletonCluster: return "singleton-cluster";
    case ErrorCode::kInvalidAssignment: return "invalid-assignment";
    case ErrorCode::kNonmonotoneInput: return "nonmonotone-input";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kInstanceTooLarge: return "instance-too-large";
    case ErrorCode::kNoFeasibleGridPoint: return "no-feasible-grid-point";
    case ErrorCode::kIoFailure: return "io-failure";
  }
  return "unknown";
}

}  // namespace nbnoma
