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

#ifndef NBNOMA_CLUSTERING_H_
#define NBNOMA_CLUSTERING_H_

#include <vector>

#include "nbnoma/rate_model.h"
#include "nbnoma/scenario.h"

namespace nbnoma {

// Mean linear power gain of a device across all subcarriers.
double AverageGain(int device, const Scenario& scenario);

// Ids of all devices of one kind, by descending average gain; equal gains
// keep the lower id first.
std::vector<int> SortByAverageGain(const Scenario& scenario, DeviceKind kind);

// URLLC phase. The sorted URLLCs are dealt round-robin over the clusters:
// the first C take rank 1 of clusters 1..C, the next C rank 2, and so on.
// Throws kCapacityExceeded if U > C * k_max.
ClusterAssignment ClusterUrllc(const Scenario& scenario, int num_clusters);

// mMTC phase on top of a URLLC partial assignment. Sorted mMTCs first fill
// every empty rank 1 in cluster order, then the lowest free rank of each
// cluster, one device per cluster per pass, until all are placed.
//
// A cluster left with one member is repaired: the lowest-gain mMTC of the
// largest cluster that can spare one (at least three members) moves in. If no
// cluster can spare a member, the lone device moves into the cluster with the
// most free ranks instead. Moved devices are inserted at their gain-sorted
// position within their kind, so URLLCs stay ahead of mMTCs.
//
// Throws kCapacityExceeded if the mMTCs do not fit, kSingletonCluster if a
// singleton cannot be repaired.
ClusterAssignment ClusterMmtc(const Scenario& scenario,
                              ClusterAssignment partial);

// Both phases with the scenario's num_clusters.
ClusterAssignment BuildClusters(const Scenario& scenario);

// Clusters that hold URLLCs only (C5 is vacuous there).
std::vector<int> AllUrllcClusters(const Scenario& scenario,
                                  const ClusterAssignment& assignment);

}  // namespace nbnoma

#endif  // NBNOMA_CLUSTERING_H_
