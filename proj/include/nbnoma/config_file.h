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

#ifndef NBNOMA_CONFIG_FILE_H_
#define NBNOMA_CONFIG_FILE_H_

#include <string>
#include <string_view>

#include "nbnoma/scenario.h"

namespace nbnoma {

// Parses the flat `key = value` scenario format. Keys are the
// ScenarioConfig field names; power and noise values may instead be given in
// dBm through the `_dbm`-suffixed key (noise_psd_dbm is dBm/Hz). Ranges are
// written as two numbers, e.g. `mmtc_rate_threshold_range = 100, 2000`.
// `#` starts a comment. Omitted keys keep their defaults, except that an
// omitted num_clusters (or `num_clusters = auto`) resolves to
// ceil((num_urllc + num_mmtc) / max_rank).
//
// Unknown keys, duplicate keys, malformed values and configs violating
// ValidateConfig all raise NomaError(kInvalidConfig) with the line number.
ScenarioConfig ParseConfig(std::string_view text);

// Reads and parses a config file; unreadable files are kIoFailure.
ScenarioConfig LoadConfig(const std::string& path);

// Renders a config in the same format, using linear units.
std::string FormatConfig(const ScenarioConfig& config);

}  // namespace nbnoma

#endif  // NBNOMA_CONFIG_FILE_H_
