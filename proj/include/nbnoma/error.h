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

#ifndef NBNOMA_ERROR_H_
#define NBNOMA_ERROR_H_

#include <stdexcept>
#include <string>

namespace nbnoma {

enum class ErrorCode {
  kInvalidConfig,
  kUnassignedDevice,
  kInconsistentPower,
  kDegenerateInput,
  kCapacityExceeded,
  kSingletonCluster,
  kInvalidAssignment,
  kNonmonotoneInput,
  kInfeasible,
  kNonConvergence,
  kInstanceTooLarge,
  kNoFeasibleGridPoint,
  kIoFailure,
};

// Stable kebab-case name of an error code, e.g. "invalid-config".
const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// identifies the failure class; what() carries the human-readable detail.
class NomaError : public std::runtime_error {
 public:
  NomaError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nbnoma

#endif  // NBNOMA_ERROR_H_
