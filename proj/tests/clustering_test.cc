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

#include <algorithm>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "nbnoma/clustering.h"
#include "nbnoma/error.h"
#include "nbnoma/random.h"
#include "nbnoma/rate_model.h"
#include "test_util.h"

namespace nbnoma {
namespace {

using testing::MakeScenario;
using testing::Mmtc;
using testing::SmallConfig;
using testing::Urllc;

using Clusters = std::vector<std::vector<int>>;

TEST(AverageGainTest, ArithmeticMean) {
  const Scenario s = MakeScenario(
      {Mmtc({1.0, 2.0, 3.0, 4.0}), Mmtc({7.0, 7.0, 7.0, 7.0})}, 1, 2);
  EXPECT_DOUBLE_EQ(AverageGain(0, s), 2.5);
  EXPECT_DOUBLE_EQ(AverageGain(1, s), 7.0);
}

TEST(AverageGainTest, MatchesIndependentMean) {
  const Scenario s = GenerateScenario(SmallConfig(4, 12, 48, 2, 8));
  for (const Device& d : s.devices()) {
    long double sum = 0.0L;
    for (double h : d.gains) sum += h;
    EXPECT_NEAR(AverageGain(d.id, s), static_cast<double>(sum / 48),
                1e-13 * AverageGain(d.id, s));
  }
}

TEST(SortTest, DescendingGainLowerIdOnTies) {
  const Scenario s = MakeScenario(
      {Mmtc({1.0}), Mmtc({3.0}), Mmtc({1.0}), Mmtc({2.0})}, 2, 2);
  EXPECT_EQ(SortByAverageGain(s, DeviceKind::kMmtc),
            (std::vector<int>{1, 3, 0, 2}));
}

TEST(ClusterUrllcTest, FewerUrllcsThanClusters) {
  const Scenario s = MakeScenario({Urllc({2.0}), Urllc({1.0}), Mmtc({1.0}),
                                   Mmtc({1.0}), Mmtc({1.0}), Mmtc({1.0})},
                                  4, 2);
  const ClusterAssignment a = ClusterUrllc(s, 4);
  EXPECT_EQ(a.clusters, (Clusters{{0}, {1}, {}, {}}));
}

TEST(ClusterUrllcTest, RoundRobinOverRanks) {
  // Gains descend with id, so the sorted order is 0..4.
  const Scenario s = MakeScenario({Urllc({5.0}), Urllc({4.0}), Urllc({3.0}),
                                   Urllc({2.0}), Urllc({1.0}), Mmtc({1.0})},
                                  2, 3);
  EXPECT_EQ(ClusterUrllc(s, 2).clusters, (Clusters{{0, 2, 4}, {1, 3}}));
}

TEST(ClusterUrllcTest, NoUrllcs) {
  const Scenario s = MakeScenario({Mmtc({1.0}), Mmtc({1.0})}, 1, 2);
  EXPECT_EQ(ClusterUrllc(s, 1).clusters, (Clusters{{}}));
}

TEST(ClusterUrllcTest, CapacityExceeded) {
  const Scenario s = MakeScenario({Urllc({5.0}), Urllc({4.0}), Urllc({3.0}),
                                   Urllc({2.0}), Urllc({1.0}), Mmtc({1.0})},
                                  3, 2);
  try {
    ClusterUrllc(s, 2);
    FAIL();
  } catch (const NomaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacityExceeded);
  }
}

TEST(ClusterMmtcTest, FillRankOneThenRoundRobin) {
  const Scenario s = MakeScenario(
      {Mmtc({4.0}), Mmtc({3.0}), Mmtc({2.0}), Mmtc({1.0})}, 2, 2);
  EXPECT_EQ(BuildClusters(s).clusters, (Clusters{{0, 2}, {1, 3}}));
}

TEST(ClusterMmtcTest, OneMmtcPerUrllcCluster) {
  const Scenario s = MakeScenario(
      {Urllc({1.0}), Urllc({2.0}), Mmtc({4.0}), Mmtc({3.0})}, 2, 2);
  EXPECT_EQ(BuildClusters(s).clusters, (Clusters{{1, 2}, {0, 3}}));
}

TEST(ClusterMmtcTest, MinimalPair) {
  const Scenario s = MakeScenario({Urllc({1.0}), Mmtc({1.0})}, 1, 2);
  EXPECT_EQ(BuildClusters(s).clusters, (Clusters{{0, 1}}));
}

TEST(ClusterMmtcTest, SingletonRepairedFromLargestCluster) {
  // URLLCs: cluster 0 gets ids 0 and 2, cluster 1 gets id 1; the only mMTC
  // lands in cluster 0 and must move to the lone URLLC.
  const Scenario s = MakeScenario(
      {Urllc({3.0}), Urllc({2.0}), Urllc({1.0}), Mmtc({1.0})}, 2, 3);
  const ClusterAssignment a = BuildClusters(s);
  EXPECT_EQ(a.clusters, (Clusters{{0, 2}, {1, 3}}));
  EXPECT_TRUE(CheckStructure(s, a).empty());
}

TEST(ClusterMmtcTest, SingletonDissolvedWhenNoDonor) {
  const Scenario s =
      MakeScenario({Mmtc({3.0}), Mmtc({2.0}), Mmtc({1.0})}, 2, 3);
  const ClusterAssignment a = BuildClusters(s);
  EXPECT_EQ(a.clusters, (Clusters{{0, 1, 2}, {}}));
  EXPECT_TRUE(CheckStructure(s, a).empty());
}

TEST(ClusterMmtcTest, UnrepairableSingleton) {
  const Scenario s =
      MakeScenario({Mmtc({3.0}), Mmtc({2.0}), Mmtc({1.0})}, 2, 2);
  try {
    BuildClusters(s);
    FAIL();
  } catch (const NomaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingletonCluster);
  }
}

TEST(ClusteringPropertiesTest, GeneratedScenarios) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = rng.UniformInt(2, 4);
    const int u = rng.UniformInt(0, 20);
    const int m = rng.UniformInt(u == 0 ? 2 : 1, 40);
    ScenarioConfig c = SmallConfig(u, m, 8, k, rng.NextRaw());
    const Scenario s = GenerateScenario(c);
    ClusterAssignment a;
    try {
      a = BuildClusters(s);
    } catch (const NomaError& e) {
      // Only a lone leftover device with no room anywhere may fail.
      EXPECT_EQ(e.code(), ErrorCode::kSingletonCluster);
      continue;
    }
    ASSERT_TRUE(CheckStructure(s, a).empty()) << "trial " << trial;

    for (const auto& members : a.clusters) {
      for (size_t r = 1; r < members.size(); ++r) {
        const Device& prev = s.device(members[r - 1]);
        const Device& cur = s.device(members[r]);
        if (prev.kind == cur.kind) {
          EXPECT_GE(AverageGain(prev.id, s), AverageGain(cur.id, s));
        }
      }
    }
    if (u <= c.num_clusters) {
      const auto slots = LocateDevices(a, s.num_devices());
      for (int d = 0; d < u; ++d) EXPECT_EQ(slots[d].rank, 1);
    }
  }
}

TEST(ClusteringPropertiesTest, RelabelingDevicesKeepsPlacements) {
  const ScenarioConfig c = SmallConfig(5, 15, 6, 3, 77);
  const Scenario s = GenerateScenario(c);
  // Reverse ids within each kind.
  std::vector<Device> devices = s.devices();
  std::reverse(devices.begin(), devices.begin() + 5);
  std::reverse(devices.begin() + 5, devices.end());
  for (int i = 0; i < static_cast<int>(devices.size()); ++i) devices[i].id = i;
  const Scenario t(c, devices);

  auto placements = [](const Scenario& sc) {
    std::vector<std::tuple<int, int, double>> out;
    const ClusterAssignment a = BuildClusters(sc);
    for (int cl = 0; cl < a.num_clusters(); ++cl) {
      for (size_t r = 0; r < a.clusters[cl].size(); ++r) {
        out.emplace_back(cl, static_cast<int>(r),
                         AverageGain(a.clusters[cl][r], sc));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  EXPECT_EQ(placements(s), placements(t));
}

TEST(ClusteringTest, AllUrllcClustersAreReported) {
  const Scenario s = MakeScenario(
      {Urllc({4.0}), Urllc({3.0}), Urllc({2.0}), Urllc({1.0}), Mmtc({1.0}),
       Mmtc({0.5})},
      3, 2);
  const ClusterAssignment a = BuildClusters(s);
  EXPECT_TRUE(CheckStructure(s, a).empty());
  EXPECT_EQ(AllUrllcClusters(s, a), (std::vector<int>{0}));
}

}  // namespace
}  // namespace nbnoma
