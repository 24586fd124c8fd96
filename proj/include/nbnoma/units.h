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

#ifndef NBNOMA_UNITS_H_
#define NBNOMA_UNITS_H_

#include <cmath>
#include <numbers>

namespace nbnoma {

// dBm -> W (and dBm/Hz -> W/Hz; the conversion is the same).
inline double DbmToWatts(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double WattsToDbm(double watts) {
  return 10.0 * std::log10(watts) + 30.0;
}

// log2(1 + x), accurate for small x.
inline double Log2OnePlus(double x) {
  return std::log1p(x) / std::numbers::ln2;
}

}  // namespace nbnoma

#endif  // NBNOMA_UNITS_H_
