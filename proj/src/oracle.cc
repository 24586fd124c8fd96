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

#include "nbnoma/oracle.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nbnoma/allocation.h"
#include "nbnoma/units.h"

namespace nbnoma {
namespace {

void CheckMckpBounds(const Scenario& scenario,
                     const ClusterAssignment& assignment) {
  if (scenario.num_subcarriers() > kMckpMaxSubcarriers ||
      assignment.num_clusters() > kMckpMaxClusters ||
      assignment.num_clusters() < 1) {
    std::ostringstream msg;
    msg << "MCKP enumeration needs S <= " << kMckpMaxSubcarriers
        << " and 1 <= C <= " << kMckpMaxClusters << ", got S="
        << scenario.num_subcarriers() << " C=" << assignment.num_clusters();
    throw NomaError(ErrorCode::kInstanceTooLarge, msg.str());
  }
}

std::vector<std::vector<int>> Members(const ClusterAssignment& assignment) {
  std::vector<std::vector<int>> out(assignment.num_clusters());
  for (int c = 0; c < assignment.num_clusters(); ++c) {
    for (int d : assignment.clusters[c]) {
      if (d != kEmptySlot) out[c].push_back(d);
    }
  }
  return out;
}

// Sum of the SIC rates of `members` on tone s given each member's power.
template <typename PowerOf>
double ToneSumRate(const Scenario& scenario, const std::vector<int>& members,
                   int s, PowerOf power_of) {
  if (members.empty()) return 0.0;
  std::vector<double> received(members.size()), rates(members.size());
  for (size_t k = 0; k < members.size(); ++k) {
    received[k] = scenario.gain(members[k], s) * power_of(members[k]);
  }
  SicToneRates(received, scenario.config().noise_power(),
               scenario.config().subcarrier_bandwidth, rates);
  double total = 0.0;
  for (double r : rates) total += r;
  return total;
}

// Enumerates all maps in lexicographic order; value(map, counts) scores one.
template <typename Value>
MckpResult Enumerate(int num_tones, int num_clusters, Value value) {
  MckpResult best;
  std::vector<int> digits(num_tones, 0);
  std::vector<int> counts(num_clusters, 0);
  counts[0] = num_tones;
  bool first = true;
  while (true) {
    const double v = value(digits, counts);
    ++best.maps_evaluated;
    if (first || v > best.objective) {
      best.objective = v;
      best.map.owner = digits;
      first = false;
    }
    int pos = num_tones - 1;
    while (pos >= 0 && digits[pos] == num_clusters - 1) {
      --counts[digits[pos]];
      digits[pos] = 0;
      ++counts[0];
      --pos;
    }
    if (pos < 0) break;
    --counts[digits[pos]];
    ++digits[pos];
    ++counts[digits[pos]];
  }
  return best;
}

}  // namespace

MckpResult MckpOracle(const Scenario& scenario,
                      const ClusterAssignment& assignment) {
  CheckMckpBounds(scenario, assignment);
  const int num_tones = scenario.num_subcarriers();
  const int num_clusters = assignment.num_clusters();
  const auto members = Members(assignment);
  // table[c][s][k]: cluster c's sum rate on tone s when it owns k tones.
  std::vector<std::vector<std::vector<double>>> table(
      num_clusters, std::vector<std::vector<double>>(
                        num_tones, std::vector<double>(num_tones + 1, 0.0)));
  for (int c = 0; c < num_clusters; ++c) {
    for (int s = 0; s < num_tones; ++s) {
      for (int k = 1; k <= num_tones; ++k) {
        table[c][s][k] = ToneSumRate(scenario, members[c], s, [&](int d) {
          return scenario.device(d).power_budget / static_cast<double>(k);
        });
      }
    }
  }
  return Enumerate(num_tones, num_clusters,
                   [&](const std::vector<int>& map,
                       const std::vector<int>& counts) {
                     double total = 0.0;
                     for (int s = 0; s < num_tones; ++s) {
                       total += table[map[s]][s][counts[map[s]]];
                     }
                     return total;
                   });
}

MckpResult MckpOracle(const Scenario& scenario,
                      const ClusterAssignment& assignment,
                      const PowerMatrix& powers) {
  CheckMckpBounds(scenario, assignment);
  const int num_tones = scenario.num_subcarriers();
  const int num_clusters = assignment.num_clusters();
  if (powers.num_devices() != scenario.num_devices() ||
      powers.num_subcarriers() != num_tones) {
    throw NomaError(ErrorCode::kInconsistentPower,
                    "power matrix does not match the scenario");
  }
  const auto members = Members(assignment);
  std::vector<std::vector<double>> value(num_clusters,
                                         std::vector<double>(num_tones));
  for (int c = 0; c < num_clusters; ++c) {
    for (int s = 0; s < num_tones; ++s) {
      value[c][s] = ToneSumRate(scenario, members[c], s,
                                [&](int d) { return powers.at(d, s); });
    }
  }
  return Enumerate(num_tones, num_clusters,
                   [&](const std::vector<int>& map, const std::vector<int>&) {
                     double total = 0.0;
                     for (int s = 0; s < num_tones; ++s) {
                       total += value[map[s]][s];
                     }
                     return total;
                   });
}

ExhaustiveResult ExhaustiveClustering(const Scenario& scenario) {
  const int n = scenario.num_devices();
  const int num_clusters = scenario.config().num_clusters;
  const int max_rank = scenario.config().max_rank;
  if (n > kExhaustiveMaxDevices || num_clusters > kExhaustiveMaxClusters ||
      max_rank > kExhaustiveMaxRank ||
      scenario.num_subcarriers() > kExhaustiveMaxSubcarriers) {
    std::ostringstream msg;
    msg << "exhaustive clustering needs U+M <= " << kExhaustiveMaxDevices
        << ", C <= " << kExhaustiveMaxClusters << ", k_max <= "
        << kExhaustiveMaxRank << ", S <= " << kExhaustiveMaxSubcarriers;
    throw NomaError(ErrorCode::kInstanceTooLarge, msg.str());
  }

  ExhaustiveResult best;
  MckpResult best_map;
  bool found = false;
  std::vector<int> place(n, 0);
  while (true) {
    // Members of each cluster for this placement, URLLCs then mMTCs.
    std::vector<std::vector<int>> urllc(num_clusters), mmtc(num_clusters);
    bool fits = true;
    for (int d = 0; d < n; ++d) {
      (scenario.device(d).kind == DeviceKind::kUrllc ? urllc : mmtc)[place[d]]
          .push_back(d);
    }
    for (int c = 0; c < num_clusters; ++c) {
      const size_t size = urllc[c].size() + mmtc[c].size();
      fits = fits && size != 1 && static_cast<int>(size) <= max_rank;
    }
    if (fits) {
      // Odometer over per-cluster member orders.
      while (true) {
        ClusterAssignment candidate;
        candidate.max_rank = max_rank;
        candidate.clusters.resize(num_clusters);
        for (int c = 0; c < num_clusters; ++c) {
          candidate.clusters[c] = urllc[c];
          candidate.clusters[c].insert(candidate.clusters[c].end(),
                                       mmtc[c].begin(), mmtc[c].end());
        }
        if (CheckStructure(scenario, candidate).empty()) {
          ++best.assignments_evaluated;
          MckpResult r = MckpOracle(scenario, candidate);
          if (!found || r.objective > best_map.objective) {
            best_map = std::move(r);
            best.assignment = std::move(candidate);
            found = true;
          }
        }
        int c = num_clusters - 1;
        for (; c >= 0; --c) {
          if (std::next_permutation(mmtc[c].begin(), mmtc[c].end())) break;
          if (std::next_permutation(urllc[c].begin(), urllc[c].end())) break;
        }
        if (c < 0) break;
      }
    }
    int pos = n - 1;
    while (pos >= 0 && place[pos] == num_clusters - 1) place[pos--] = 0;
    if (pos < 0) break;
    ++place[pos];
  }
  if (!found) {
    throw NomaError(ErrorCode::kInvalidAssignment,
                    "no structurally valid clustering exists");
  }

  best.map = best_map.map;
  best.objective = best_map.objective;
  best.powers = PowerMatrix(n, scenario.num_subcarriers());
  for (int c = 0; c < num_clusters; ++c) {
    const std::vector<int> owned = best.map.OwnedBy(c);
    if (owned.empty()) continue;
    best.powers = EqualSplit(scenario, std::move(best.powers),
                             best.assignment.clusters[c], owned);
  }
  best.report =
      ComputeRateReport(scenario, best.assignment, best.map, best.powers);
  return best;
}

double DirectOrderedSumRate(std::span<const double> powers,
                            const OrderedCluster& cluster) {
  double total = 0.0;
  double later = 0.0;  // sum of powers after j
  for (size_t j = powers.size(); j-- > 0;) {
    const double lambda = cluster.lambdas[j];
    total += Log2OnePlus(lambda * powers[j] / (1.0 + lambda * later));
    later += powers[j];
  }
  return cluster.bandwidth_factor * total;
}

GridPowerResult GridPowerOracle(const OrderedCluster& cluster, double step) {
  ValidateCluster(cluster);
  const int n = cluster.size();
  if (n > kGridMaxUsers) {
    throw NomaError(ErrorCode::kInstanceTooLarge,
                    "grid oracle handles at most 3 users");
  }
  if (!(step > 0.0)) {
    throw NomaError(ErrorCode::kInvalidConfig, "grid step must be positive");
  }
  const double pmax = cluster.total_budget;
  const long long last = static_cast<long long>(std::floor(pmax / step * (1.0 + 1e-12)));

  GridPowerResult best;
  bool found = false;
  std::vector<double> z(n);
  z[0] = pmax;
  const LinearizedRates lin = LinearizeRates(cluster);
  const double tol = 1e-12 * pmax;
  auto feasible = [&]() {
    for (int j = 0; j + 1 < n; ++j) {
      if (z[j + 1] > lin.delta[j] * z[j] - lin.rho[j] + tol) return false;
    }
    if (z[n - 1] < lin.theta - tol) return false;
    for (int j = 0; j < n; ++j) {
      const double next = j + 1 < n ? z[j + 1] : 0.0;
      const double after = j + 2 < n ? z[j + 2] : 0.0;
      if (z[j] - next < next - after - tol) return false;
    }
    return z[n - 1] >= -tol;
  };
  auto consider = [&]() {
    if (!feasible()) return;
    ++best.points_feasible;
    const std::vector<double> p = FromZ(z);
    const double v = DirectOrderedSumRate(p, cluster);
    if (!found || v > best.objective) {
      best.objective = v;
      best.powers = p;
      best.z = z;
      found = true;
    }
  };
  if (n == 1) {
    consider();
  } else {
    for (long long i = 0; i <= last; ++i) {
      z[1] = std::min(pmax, static_cast<double>(i) * step);
      if (n == 2) {
        consider();
        continue;
      }
      for (long long k = 0; k <= i; ++k) {
        z[2] = static_cast<double>(k) * step;
        consider();
      }
    }
  }
  if (!found) {
    throw NomaError(ErrorCode::kNoFeasibleGridPoint,
                    "no grid point satisfies the constraints");
  }
  return best;
}

}  // namespace nbnoma
