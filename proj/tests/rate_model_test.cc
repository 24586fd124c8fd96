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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nbnoma/error.h"
#include "nbnoma/oracle.h"
#include "nbnoma/random.h"
#include "nbnoma/rate_model.h"
#include "test_util.h"

namespace nbnoma {
namespace {

using testing::MakeScenario;
using testing::Mmtc;
using testing::Urllc;

bool HasConstraint(const std::vector<Violation>& v, const std::string& id) {
  for (const Violation& x : v) {
    if (x.constraint == id) return true;
  }
  return false;
}

TEST(SicToneRatesTest, UnitSnrGivesOneBitPerHertz) {
  std::vector<double> out(1);
  const std::vector<double> received = {2.5};
  SicToneRates(received, 2.5, 3750.0, out);
  EXPECT_DOUBLE_EQ(out[0], 3750.0);
}

TEST(DeviceRateTest, TwoDeviceHandExample) {
  // Rank 1: |h|^2 = 4, p = 1; rank 2: |h|^2 = 1, p = 1; N0 W = 1, W = 1.
  const Scenario s = MakeScenario({Mmtc({4.0}, 1.0), Mmtc({1.0}, 1.0)}, 1, 2);
  ClusterAssignment a{{{0, 1}}, 2};
  SubcarrierMap map{{0}};
  PowerMatrix p(2, 1);
  p.at(0, 0) = 1.0;
  p.at(1, 0) = 1.0;
  EXPECT_NEAR(DeviceRate(0, s, a, map, p), std::log2(3.0), 1e-15);
  EXPECT_NEAR(DeviceRate(1, s, a, map, p), 1.0, 1e-15);

  const RateReport r = ComputeRateReport(s, a, map, p);
  EXPECT_EQ(r.satisfied_count, 2);
  EXPECT_NEAR(r.sum_rate, std::log2(3.0) + 1.0, 1e-15);
}

TEST(DeviceRateTest, ZeroPowerGivesZeroRate) {
  const Scenario s =
      MakeScenario({Mmtc({4.0, 2.0}, 1.0), Mmtc({1.0, 1.0}, 1.0)}, 1, 2);
  ClusterAssignment a{{{0, 1}}, 2};
  SubcarrierMap map{{0, 0}};
  PowerMatrix p(2, 2);
  p.at(1, 0) = 1.0;
  EXPECT_EQ(DeviceRate(0, s, a, map, p), 0.0);
  const RateReport r = ComputeRateReport(s, a, map, PowerMatrix(2, 2));
  EXPECT_EQ(r.satisfied_count, 0);
  EXPECT_FALSE(r.fairness.has_value());
}

TEST(DeviceRateTest, EqualRatesAreFair) {
  // Equal gains on one tone; rank 1 transmits twice the power of rank 2 so
  // that both see an SINR of 1.
  const Scenario s =
      MakeScenario({Mmtc({1.0}, 0.0, 2.0), Mmtc({1.0}, 0.0, 2.0)}, 1, 2);
  ClusterAssignment a{{{0, 1}}, 2};
  SubcarrierMap map{{0}};
  PowerMatrix p(2, 1);
  p.at(0, 0) = 2.0;
  p.at(1, 0) = 1.0;
  const RateReport r = ComputeRateReport(s, a, map, p);
  EXPECT_DOUBLE_EQ(r.rate[0], 1.0);
  EXPECT_DOUBLE_EQ(r.rate[1], 1.0);
  ASSERT_TRUE(r.fairness.has_value());
  EXPECT_DOUBLE_EQ(*r.fairness, 1.0);
}

TEST(DeviceRateTest, Errors) {
  const Scenario s =
      MakeScenario({Mmtc({1.0, 1.0}), Mmtc({1.0, 1.0}), Mmtc({1.0, 1.0})}, 2, 2);
  ClusterAssignment a{{{0, 1}, {}}, 2};
  SubcarrierMap map{{0, 1}};
  PowerMatrix p(3, 2);
  try {
    DeviceRate(2, s, a, map, p);
    FAIL();
  } catch (const NomaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnassignedDevice);
  }
  p.at(0, 1) = 1.0;  // tone 1 belongs to cluster 1
  try {
    DeviceRate(0, s, a, map, p);
    FAIL();
  } catch (const NomaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentPower);
  }
}

TEST(JainFairnessTest, Examples) {
  EXPECT_DOUBLE_EQ(JainFairness(std::vector<double>{5, 5, 5, 5}), 1.0);
  EXPECT_DOUBLE_EQ(JainFairness(std::vector<double>{1, 0, 0, 0}), 0.25);
  EXPECT_NEAR(JainFairness(std::vector<double>{1, 2, 3}), 36.0 / 42.0, 1e-15);
}

TEST(JainFairnessTest, DegenerateInputs) {
  for (const std::vector<double>& bad :
       {std::vector<double>{}, std::vector<double>{0, 0},
        std::vector<double>{1, -1}}) {
    try {
      JainFairness(bad);
      ADD_FAILURE();
    } catch (const NomaError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
    }
  }
}

TEST(JainFairnessTest, AlwaysInUnitInterval) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> r(rng.UniformInt(1, 50));
    for (double& x : r) x = rng.Uniform(0.0, 1e6) * (rng.UniformInt(0, 3) > 0);
    r[0] += 1.0;
    const double j = JainFairness(r);
    EXPECT_GT(j, 0.0);
    EXPECT_LE(j, 1.0);
    EXPECT_GE(j, 1.0 / r.size() - 1e-15);
  }
}

TEST(ValidateTest, ValidAllocationIsClean) {
  const Scenario s = MakeScenario(
      {Urllc({2.0, 1.0}), Mmtc({1.0, 3.0}), Mmtc({1.0, 1.0})}, 1, 3);
  ClusterAssignment a{{{0, 1, 2}}, 3};
  SubcarrierMap map{{0, 0}};
  PowerMatrix p(3, 2);
  for (int d = 0; d < 3; ++d) p.at(d, 0) = p.at(d, 1) = 0.5;
  EXPECT_TRUE(Validate(s, a, map, p).empty());
}

TEST(ValidateTest, SingletonClusterIsC11) {
  const Scenario s =
      MakeScenario({Mmtc({1.0}), Mmtc({1.0}), Mmtc({1.0})}, 2, 2);
  ClusterAssignment a{{{0, 1}, {2}}, 2};
  EXPECT_TRUE(HasConstraint(CheckStructure(s, a), "C11"));
}

TEST(ValidateTest, UrllcBelowMmtcIsC5) {
  const Scenario s = MakeScenario({Urllc({1.0}), Mmtc({1.0})}, 1, 2);
  ClusterAssignment a{{{1, 0}}, 2};
  const auto v = CheckStructure(s, a);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "C5");
}

TEST(ValidateTest, StructuralViolations) {
  const Scenario s =
      MakeScenario({Mmtc({1.0}), Mmtc({1.0}), Mmtc({1.0}), Mmtc({1.0})}, 2, 2);
  // Device 3 missing, device 0 twice.
  EXPECT_TRUE(HasConstraint(CheckStructure(s, {{{0, 1}, {2, 0}}, 2}), "C8"));
  // Gap at rank 1.
  EXPECT_TRUE(
      HasConstraint(CheckStructure(s, {{{0, 1}, {kEmptySlot, 2, 3}}, 3}), "C6"));
  // Too many ranks.
  EXPECT_TRUE(HasConstraint(CheckStructure(s, {{{0, 1, 2}, {3}}, 2}), "C10"));
  // Unknown device id.
  EXPECT_TRUE(HasConstraint(CheckStructure(s, {{{0, 1}, {2, 3, 9}}, 3}), "C10"));
}

TEST(ValidateTest, PowerViolations) {
  const Scenario s = MakeScenario(
      {Urllc({1.0, 1.0}, 0.0, 1.0), Mmtc({1.0, 1.0}, 0.0, 1.0),
       Mmtc({1.0, 1.0}), Mmtc({1.0, 1.0})},
      2, 2);
  ClusterAssignment a{{{0, 1}, {2, 3}}, 2};
  SubcarrierMap map{{0, 1}};
  PowerMatrix p(4, 2);
  p.at(0, 0) = 1.0;
  p.at(1, 0) = 1.5;  // over budget
  p.at(2, 0) = 0.1;  // tone 0 is not cluster 1's
  p.at(3, 1) = -0.1;
  const auto v = Validate(s, a, map, p);
  EXPECT_TRUE(HasConstraint(v, "C2"));
  EXPECT_TRUE(HasConstraint(v, "PWR"));
  EXPECT_TRUE(HasConstraint(v, "C14"));

  PowerMatrix under(4, 2);
  under.at(0, 0) = 0.5;  // URLLC spends half its budget
  under.at(1, 0) = 1.0;
  under.at(2, 1) = under.at(3, 1) = 1.0;
  EXPECT_TRUE(HasConstraint(Validate(s, a, map, under), "C4"));

  SubcarrierMap bad{{0, 7}};
  EXPECT_TRUE(HasConstraint(Validate(s, a, bad, PowerMatrix(4, 2)), "C12"));
  EXPECT_TRUE(HasConstraint(Validate(s, a, map, PowerMatrix(3, 2)), "SHAPE"));
}

TEST(RatePropertiesTest, SicChainConservation) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = rng.UniformInt(1, 8);
    std::vector<double> received(k), out(k);
    double total = 0.0;
    for (double& x : received) {
      x = std::pow(10.0, rng.Uniform(-3.0, 9.0));
      total += x;
    }
    SicToneRates(received, 1.0, 1.0, out);
    double sum = 0.0;
    for (double r : out) sum += r;
    const double closed = std::log1p(total) / std::numbers::ln2;
    EXPECT_LE(std::abs(sum - closed), 1e-9 * closed);
  }
}

TEST(RatePropertiesTest, TopRankPowerMonotonicity) {
  std::vector<double> base = {5.0, 3.0, 2.0}, more = {5.0, 3.0, 2.5};
  std::vector<double> a(3), b(3);
  SicToneRates(base, 1.0, 1.0, a);
  SicToneRates(more, 1.0, 1.0, b);
  EXPECT_GT(b[2], a[2]);
  EXPECT_LT(b[0], a[0]);
  EXPECT_LT(b[1], a[1]);
}

TEST(RatePropertiesTest, RankKIgnoresLowerRanks) {
  std::vector<double> a = {5.0, 3.0, 2.0}, b = {50.0, 0.1, 2.0};
  std::vector<double> ra(3), rb(3);
  SicToneRates(a, 1.0, 1.0, ra);
  SicToneRates(b, 1.0, 1.0, rb);
  EXPECT_EQ(ra[2], rb[2]);
}

TEST(RatePropertiesTest, MatchesOrderedUserFormulaForEqualGains) {
  // With one gain g shared by every member, ordering by rank (rank 1 decoded
  // first) equals the ordered-user formula with lambda_j = g / (N0 W).
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = rng.UniformInt(1, 4);
    const double g = std::pow(10.0, rng.Uniform(-2.0, 3.0));
    std::vector<double> p(k), received(k), out(k);
    for (int j = 0; j < k; ++j) {
      p[j] = rng.Uniform(0.01, 1.0);
      received[j] = g * p[j];
    }
    SicToneRates(received, 1.0, 1.0, out);
    OrderedCluster c;
    c.lambdas.assign(k, g);
    c.thresholds.assign(k, 0.0);
    c.total_budget = 1.0;
    double sum = 0.0;
    for (double r : out) sum += r;
    EXPECT_NEAR(DirectOrderedSumRate(p, c), sum, 1e-12 * sum);
  }
}

TEST(RatePropertiesTest, OrderedUserFormulaDiffersForUnequalGains) {
  // The ordered-user formula scales the interference by the user's own gain;
  // an uplink receiver sees each interferer through its own channel.
  const std::vector<double> received = {1.0 * 1.0, 4.0 * 1.0};
  std::vector<double> out(2);
  SicToneRates(received, 1.0, 1.0, out);
  OrderedCluster c{{1.0, 4.0}, {0.0, 0.0}, 2.0, 1.0};
  const std::vector<double> p = {1.0, 1.0};
  EXPECT_GT(std::abs(DirectOrderedSumRate(p, c) - (out[0] + out[1])), 0.1);
}

}  // namespace
}  // namespace nbnoma
