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

#include "nbnoma/clustering.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nbnoma/error.h"

namespace nbnoma {
namespace {

bool IsUrllc(const Scenario& scenario, int d) {
  return scenario.device(d).kind == DeviceKind::kUrllc;
}

// True if a should be ranked before b among devices of the same kind.
bool RanksBefore(const std::vector<double>& avg, int a, int b) {
  if (avg[a] != avg[b]) return avg[a] > avg[b];
  return a < b;
}

void InsertSorted(const Scenario& scenario, const std::vector<double>& avg,
                  std::vector<int>& cluster, int device) {
  const bool urllc = IsUrllc(scenario, device);
  auto it = cluster.begin();
  for (; it != cluster.end(); ++it) {
    const bool other_urllc = IsUrllc(scenario, *it);
    if (urllc && !other_urllc) break;
    if (urllc == other_urllc && RanksBefore(avg, device, *it)) break;
  }
  cluster.insert(it, device);
}

void RepairSingletons(const Scenario& scenario, ClusterAssignment& a) {
  std::vector<double> avg(scenario.num_devices());
  for (int d = 0; d < scenario.num_devices(); ++d) {
    avg[d] = AverageGain(d, scenario);
  }
  const int num_clusters = a.num_clusters();
  for (int guard = 0; guard <= scenario.num_devices(); ++guard) {
    int lone = -1;
    for (int c = 0; c < num_clusters && lone < 0; ++c) {
      if (a.clusters[c].size() == 1) lone = c;
    }
    if (lone < 0) return;

    int donor = -1;
    for (int c = 0; c < num_clusters; ++c) {
      const auto& members = a.clusters[c];
      if (members.size() < 3) continue;
      if (!std::any_of(members.begin(), members.end(),
                       [&](int d) { return !IsUrllc(scenario, d); })) {
        continue;
      }
      if (donor < 0 || members.size() > a.clusters[donor].size()) donor = c;
    }
    if (donor >= 0) {
      auto& from = a.clusters[donor];
      // mMTCs sit at the tail in gain order, so the last one is the weakest.
      auto weakest = from.end() - 1;
      for (auto it = from.begin(); it != from.end(); ++it) {
        if (!IsUrllc(scenario, *it) && RanksBefore(avg, *weakest, *it)) {
          weakest = it;
        }
      }
      const int moved = *weakest;
      from.erase(weakest);
      InsertSorted(scenario, avg, a.clusters[lone], moved);
      continue;
    }

    int target = -1;
    for (int c = 0; c < num_clusters; ++c) {
      if (c == lone || a.clusters[c].empty()) continue;
      const int free = a.max_rank - static_cast<int>(a.clusters[c].size());
      if (free <= 0) continue;
      if (target < 0 ||
          free > a.max_rank - static_cast<int>(a.clusters[target].size())) {
        target = c;
      }
    }
    if (target < 0) {
      std::ostringstream msg;
      msg << "cluster " << lone << " has a single member and no cluster can "
          << "give or take a device";
      throw NomaError(ErrorCode::kSingletonCluster, msg.str());
    }
    const int moved = a.clusters[lone].front();
    a.clusters[lone].clear();
    InsertSorted(scenario, avg, a.clusters[target], moved);
  }
  throw NomaError(ErrorCode::kSingletonCluster, "singleton repair did not settle");
}

}  // namespace

double AverageGain(int device, const Scenario& scenario) {
  const auto& gains = scenario.device(device).gains;
  return std::accumulate(gains.begin(), gains.end(), 0.0) /
         static_cast<double>(gains.size());
}

std::vector<int> SortByAverageGain(const Scenario& scenario, DeviceKind kind) {
  std::vector<int> ids;
  std::vector<double> avg(scenario.num_devices());
  for (int d = 0; d < scenario.num_devices(); ++d) {
    avg[d] = AverageGain(d, scenario);
    if (scenario.device(d).kind == kind) ids.push_back(d);
  }
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return RanksBefore(avg, a, b); });
  return ids;
}

ClusterAssignment ClusterUrllc(const Scenario& scenario, int num_clusters) {
  if (num_clusters < 1) {
    throw NomaError(ErrorCode::kInvalidConfig, "need at least one cluster");
  }
  ClusterAssignment a;
  a.max_rank = scenario.config().max_rank;
  a.clusters.assign(num_clusters, {});
  const std::vector<int> urllc = SortByAverageGain(scenario, DeviceKind::kUrllc);
  if (static_cast<long>(urllc.size()) >
      static_cast<long>(num_clusters) * a.max_rank) {
    throw NomaError(ErrorCode::kCapacityExceeded,
                    "more URLLCs than cluster slots");
  }
  for (size_t i = 0; i < urllc.size(); ++i) {
    a.clusters[i % num_clusters].push_back(urllc[i]);
  }
  return a;
}

ClusterAssignment ClusterMmtc(const Scenario& scenario,
                              ClusterAssignment partial) {
  ClusterAssignment a = std::move(partial);
  const std::vector<int> mmtc = SortByAverageGain(scenario, DeviceKind::kMmtc);
  long free_slots = 0;
  for (const auto& members : a.clusters) {
    free_slots += std::max(0, a.max_rank - static_cast<int>(members.size()));
  }
  if (static_cast<long>(mmtc.size()) > free_slots) {
    throw NomaError(ErrorCode::kCapacityExceeded,
                    "mMTCs do not fit in the remaining cluster slots");
  }

  size_t next = 0;
  for (auto& members : a.clusters) {
    if (next < mmtc.size() && members.empty()) members.push_back(mmtc[next++]);
  }
  while (next < mmtc.size()) {
    for (auto& members : a.clusters) {
      if (next < mmtc.size() && static_cast<int>(members.size()) < a.max_rank) {
        members.push_back(mmtc[next++]);
      }
    }
  }
  RepairSingletons(scenario, a);
  return a;
}

ClusterAssignment BuildClusters(const Scenario& scenario) {
  return ClusterMmtc(scenario,
                     ClusterUrllc(scenario, scenario.config().num_clusters));
}

std::vector<int> AllUrllcClusters(const Scenario& scenario,
                                  const ClusterAssignment& assignment) {
  std::vector<int> out;
  for (int c = 0; c < assignment.num_clusters(); ++c) {
    const auto& members = assignment.clusters[c];
    if (!members.empty() &&
        std::all_of(members.begin(), members.end(),
                    [&](int d) { return IsUrllc(scenario, d); })) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace nbnoma
