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

#include "nbnoma/self_check.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "nbnoma/allocation.h"
#include "nbnoma/baselines.h"
#include "nbnoma/clustering.h"
#include "nbnoma/oracle.h"
#include "nbnoma/rate_model.h"
#include "nbnoma/units.h"

namespace nbnoma {
namespace {

// a >= b up to summation-order rounding.
bool AtLeast(double a, double b) {
  return a >= b - 1e-12 * std::max(std::abs(a), std::abs(b));
}

void Fail(CheckOutcome& check, const std::string& what) {
  if (check.failures++ == 0) check.detail = what;
}

}  // namespace

bool HasValidClustering(int n, int clusters, int max_rank) {
  // m nonempty clusters of 2..max_rank members each.
  for (int m = 1; m <= clusters; ++m) {
    if (2 * m <= n && n <= m * max_rank) return true;
  }
  return false;
}

ScenarioConfig RandomTinyConfig(const ScenarioConfig& base, Rng& rng) {
  ScenarioConfig c = base;
  do {
    const int n = rng.UniformInt(2, kExhaustiveMaxDevices);
    c.num_urllc = rng.UniformInt(0, n);
    c.num_mmtc = n - c.num_urllc;
    c.max_rank = rng.UniformInt(2, kExhaustiveMaxRank);
    c.num_clusters = rng.UniformInt(1, kExhaustiveMaxClusters);
  } while (!HasValidClustering(c.num_devices(), c.num_clusters, c.max_rank));
  c.num_subcarriers = rng.UniformInt(1, kExhaustiveMaxSubcarriers);
  c.rng_seed = rng.NextRaw();
  return c;
}

OrderedCluster RandomFeasibleCluster(Rng& rng, int max_users) {
  while (true) {
    OrderedCluster c;
    const int n = rng.UniformInt(1, max_users);
    c.total_budget = rng.Uniform(0.05, 1.0);
    c.bandwidth_factor = rng.UniformInt(0, 1) == 0 ? 1.0 : 3750.0;
    for (int j = 0; j < n; ++j) {
      c.lambdas.push_back(std::pow(10.0, rng.Uniform(-1.0, 4.0)) /
                          c.total_budget);
    }
    std::sort(c.lambdas.begin(), c.lambdas.end());
    const double p = c.total_budget / n;
    for (int j = 0; j < n; ++j) {
      const double later = p * (n - 1 - j);
      const double rate = c.bandwidth_factor *
                          Log2OnePlus(c.lambdas[j] * p /
                                      (1.0 + c.lambdas[j] * later));
      c.thresholds.push_back(rng.Uniform(0.0, 0.9) * rate);
    }
    if (FeasibleRegionCheck(c).margin >= 1e-3) return c;
  }
}

std::vector<CheckOutcome> RunSelfChecks(const ScenarioConfig& base,
                                        int instances, uint64_t seed) {
  auto named = [](const char* name) {
    CheckOutcome c;
    c.name = name;
    return c;
  };
  CheckOutcome mckp = named("mckp-dominance");
  CheckOutcome exhaustive = named("exhaustive-dominance");
  CheckOutcome constraints = named("constraint-validation");
  CheckOutcome sic = named("sic-chain-conservation");
  CheckOutcome power = named("power-solver-vs-grid");
  CheckOutcome identity = named("z-transform-identity");
  Rng rng(seed);

  for (int i = 0; i < instances; ++i) {
    const ScenarioConfig config = RandomTinyConfig(base, rng);
    std::ostringstream tag;
    tag << "instance " << i << " (U=" << config.num_urllc
        << " M=" << config.num_mmtc << " C=" << config.num_clusters
        << " k=" << config.max_rank << " S=" << config.num_subcarriers << ")";
    ++mckp.cases;
    try {
      const Scenario scenario = GenerateScenario(config);
      const ClusterAssignment assignment = BuildClusters(scenario);
      const AllocationResult greedy = Allocate(scenario, assignment);

      const MckpResult best_map = MckpOracle(scenario, assignment);
      if (!AtLeast(best_map.objective, greedy.report.sum_rate)) {
        Fail(mckp, tag.str() + ": oracle below greedy");
      }

      ++exhaustive.cases;
      const ExhaustiveResult best = ExhaustiveClustering(scenario);
      if (!AtLeast(best.objective, greedy.report.sum_rate)) {
        Fail(exhaustive, tag.str() + ": exhaustive below pipeline");
      }

      constraints.cases += 4;
      for (const auto& [name, v] :
           {std::pair{"pipeline", Validate(scenario, assignment, greedy.map,
                                           greedy.powers)},
            std::pair{"exhaustive", Validate(scenario, best.assignment,
                                             best.map, best.powers)},
            std::pair{"ofdma",
                      ValidateOrthogonal(scenario, OfdmaAllocate(scenario))},
            std::pair{"fast_ofdm",
                      ValidateOrthogonal(SplitTones(scenario),
                                         FastOfdmAllocate(scenario))}}) {
        if (!v.empty()) {
          Fail(constraints, tag.str() + " " + name + ": " +
                                v.front().constraint + " " + v.front().detail);
        }
      }

      ++sic.cases;
      const double gap =
          SicChainGap(scenario, assignment, greedy.map, greedy.powers);
      if (!(gap <= 1e-9)) {
        std::ostringstream msg;
        msg << tag.str() << ": relative gap " << gap;
        Fail(sic, msg.str());
      }
    } catch (const std::exception& e) {
      Fail(mckp, tag.str() + ": " + e.what());
    }
  }

  const int power_cases = std::min(instances, 50);
  for (int i = 0; i < power_cases; ++i) {
    ++power.cases;
    const OrderedCluster c = RandomFeasibleCluster(rng, kGridMaxUsers);
    try {
      const PowerSolution s = Solve(c);
      const GridPowerResult g = GridPowerOracle(c, c.total_budget / 1000.0);
      double total = 0.0;
      bool ordered = true;
      for (size_t j = 0; j < s.powers.size(); ++j) {
        total += s.powers[j];
        if (j > 0 && s.powers[j] > s.powers[j - 1]) ordered = false;
      }
      const double rel = std::abs(s.objective - g.objective) /
                         std::max(std::abs(g.objective), 1e-300);
      if (rel > 1e-3 || !ordered ||
          std::abs(total - c.total_budget) > 1e-9 * c.total_budget) {
        std::ostringstream msg;
        msg << "cluster " << i << ": relative gap " << rel
            << (ordered ? "" : ", powers not ordered");
        Fail(power, msg.str());
      }
    } catch (const std::exception& e) {
      Fail(power, "cluster " + std::to_string(i) + ": " + e.what());
    }
  }

  for (int i = 0; i < instances; ++i) {
    ++identity.cases;
    OrderedCluster c;
    const int n = rng.UniformInt(1, 6);
    c.bandwidth_factor = 3750.0;
    std::vector<double> p(n);
    for (int j = 0; j < n; ++j) {
      c.lambdas.push_back(std::pow(10.0, rng.Uniform(-2.0, 6.0)));
      p[j] = rng.Uniform(0.0, 1.0);
    }
    std::sort(c.lambdas.begin(), c.lambdas.end());
    const std::vector<double> z = ToZ(p);
    c.total_budget = z[0];
    const double phi = PhiObjective(z, c);
    const double direct = DirectOrderedSumRate(p, c);
    const std::vector<double> back = FromZ(z);
    double roundtrip = 0.0;
    for (int j = 0; j < n; ++j) {
      roundtrip = std::max(roundtrip, std::abs(back[j] - p[j]));
    }
    if (std::abs(phi - direct) > 1e-9 * std::abs(direct) ||
        roundtrip > 1e-12) {
      std::ostringstream msg;
      msg << "vector " << i << ": Phi " << phi << " vs direct " << direct
          << ", round trip error " << roundtrip;
      Fail(identity, msg.str());
    }
  }

  std::vector<CheckOutcome> out = {mckp,  exhaustive, constraints,
                                   sic,   power,      identity};
  for (CheckOutcome& c : out) {
    if (c.failures == 0) {
      c.detail = std::to_string(c.cases) + " cases";
    }
  }
  return out;
}

}  // namespace nbnoma
