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

// Python bindings. Thin wrappers over the library; every NomaError surfaces
// as nbnoma.NomaError whose message starts with the error code name.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "nbnoma/allocation.h"
#include "nbnoma/baselines.h"
#include "nbnoma/clustering.h"
#include "nbnoma/config_file.h"
#include "nbnoma/error.h"
#include "nbnoma/harness.h"
#include "nbnoma/oracle.h"
#include "nbnoma/power_opt.h"
#include "nbnoma/rate_model.h"
#include "nbnoma/scenario.h"
#include "nbnoma/self_check.h"

namespace py = pybind11;

namespace nbnoma {
namespace {

std::vector<std::vector<double>> Rows(const PowerMatrix& p) {
  std::vector<std::vector<double>> out(p.num_devices());
  for (int d = 0; d < p.num_devices(); ++d) {
    out[d].assign(p.row(d).begin(), p.row(d).end());
  }
  return out;
}

std::pair<double, double> AsPair(const RateRange& r) {
  return {r.min_bps, r.max_bps};
}

RateRange AsRange(const std::pair<double, double>& p) {
  return {p.first, p.second};
}

OrderedCluster MakeCluster(std::vector<double> lambdas,
                           std::vector<double> thresholds, double pmax,
                           double bandwidth) {
  OrderedCluster c{std::move(lambdas), std::move(thresholds), pmax, bandwidth};
  ValidateCluster(c);
  return c;
}

}  // namespace
}  // namespace nbnoma

PYBIND11_MODULE(_core, m) {
  using namespace nbnoma;
  m.doc() = "Uplink NB-IoT NOMA clustering, allocation and power control";

  py::register_exception<NomaError>(m, "NomaError", PyExc_RuntimeError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("num_urllc", &ScenarioConfig::num_urllc)
      .def_readwrite("num_mmtc", &ScenarioConfig::num_mmtc)
      .def_readwrite("num_subcarriers", &ScenarioConfig::num_subcarriers)
      .def_readwrite("num_clusters", &ScenarioConfig::num_clusters)
      .def_readwrite("max_rank", &ScenarioConfig::max_rank)
      .def_readwrite("subcarrier_bandwidth",
                     &ScenarioConfig::subcarrier_bandwidth)
      .def_readwrite("rb_bandwidth", &ScenarioConfig::rb_bandwidth)
      .def_readwrite("cell_radius", &ScenarioConfig::cell_radius)
      .def_readwrite("pathloss_exponent", &ScenarioConfig::pathloss_exponent)
      .def_readwrite("noise_psd", &ScenarioConfig::noise_psd)
      .def_readwrite("power_budget_urllc", &ScenarioConfig::power_budget_urllc)
      .def_readwrite("power_budget_mmtc", &ScenarioConfig::power_budget_mmtc)
      .def_property(
          "urllc_rate_threshold_range",
          [](const ScenarioConfig& c) {
            return AsPair(c.urllc_rate_threshold_range);
          },
          [](ScenarioConfig& c, std::pair<double, double> r) {
            c.urllc_rate_threshold_range = AsRange(r);
          })
      .def_property(
          "mmtc_rate_threshold_range",
          [](const ScenarioConfig& c) {
            return AsPair(c.mmtc_rate_threshold_range);
          },
          [](ScenarioConfig& c, std::pair<double, double> r) {
            c.mmtc_rate_threshold_range = AsRange(r);
          })
      .def_readwrite("min_distance", &ScenarioConfig::min_distance)
      .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
      .def_property_readonly("num_devices", &ScenarioConfig::num_devices)
      .def_property_readonly("noise_power", &ScenarioConfig::noise_power)
      .def("validate", &ValidateConfig)
      .def("__repr__", &FormatConfig);

  m.def("parse_config", &ParseConfig, py::arg("text"));
  m.def("load_config", &LoadConfig, py::arg("path"));
  m.def("format_config", &FormatConfig, py::arg("config"));

  py::class_<Device>(m, "Device")
      .def_readonly("id", &Device::id)
      .def_property_readonly("kind",
                             [](const Device& d) { return DeviceKindName(d.kind); })
      .def_readonly("distance", &Device::distance)
      .def_readonly("gains", &Device::gains)
      .def_readonly("rate_threshold", &Device::rate_threshold)
      .def_readonly("power_budget", &Device::power_budget);

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("config", &Scenario::config)
      .def_property_readonly("devices", &Scenario::devices)
      .def_property_readonly("num_devices", &Scenario::num_devices)
      .def_property_readonly("num_subcarriers", &Scenario::num_subcarriers)
      .def("gain", &Scenario::gain, py::arg("device"), py::arg("subcarrier"));

  m.def("generate_scenario", &GenerateScenario, py::arg("config"));
  m.def("split_tones", &SplitTones, py::arg("scenario"));

  py::class_<ClusterAssignment>(m, "ClusterAssignment")
      .def(py::init([](std::vector<std::vector<int>> clusters, int max_rank) {
             return ClusterAssignment{std::move(clusters), max_rank};
           }),
           py::arg("clusters"), py::arg("max_rank"))
      .def_readonly("clusters", &ClusterAssignment::clusters)
      .def_readonly("max_rank", &ClusterAssignment::max_rank);
  m.attr("EMPTY_SLOT") = kEmptySlot;
  m.attr("UNASSIGNED") = kUnassigned;

  m.def("build_clusters", &BuildClusters, py::arg("scenario"));

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("rate", &RateReport::rate)
      .def_readonly("sum_rate", &RateReport::sum_rate)
      .def_readonly("fairness", &RateReport::fairness)
      .def_readonly("satisfied_count", &RateReport::satisfied_count)
      .def_readonly("satisfied", &RateReport::satisfied);

  py::class_<Violation>(m, "Violation")
      .def_readonly("constraint", &Violation::constraint)
      .def_readonly("indices", &Violation::indices)
      .def_readonly("detail", &Violation::detail)
      .def("__repr__", [](const Violation& v) {
        return v.constraint + ": " + v.detail;
      });

  py::class_<AllocationResult>(m, "AllocationResult")
      .def_property_readonly(
          "owner", [](const AllocationResult& r) { return r.map.owner; })
      .def_property_readonly(
          "powers", [](const AllocationResult& r) { return Rows(r.powers); })
      .def_readonly("report", &AllocationResult::report);

  m.def("allocate", &Allocate, py::arg("scenario"), py::arg("assignment"));
  m.def(
      "validate",
      [](const Scenario& s, const ClusterAssignment& a,
         const AllocationResult& r) { return Validate(s, a, r.map, r.powers); },
      py::arg("scenario"), py::arg("assignment"), py::arg("result"));
  m.def(
      "sic_chain_gap",
      [](const Scenario& s, const ClusterAssignment& a,
         const AllocationResult& r) {
        return SicChainGap(s, a, r.map, r.powers);
      },
      py::arg("scenario"), py::arg("assignment"), py::arg("result"));

  py::class_<OrthogonalResult>(m, "OrthogonalResult")
      .def_readonly("owner", &OrthogonalResult::owner)
      .def_property_readonly(
          "powers", [](const OrthogonalResult& r) { return Rows(r.powers); })
      .def_readonly("report", &OrthogonalResult::report)
      .def_readonly("num_subcarriers", &OrthogonalResult::num_subcarriers)
      .def_readonly("subcarrier_bandwidth",
                    &OrthogonalResult::subcarrier_bandwidth);

  m.def("ofdma_allocate", &OfdmaAllocate, py::arg("scenario"));
  m.def("fast_ofdm_allocate", &FastOfdmAllocate, py::arg("scenario"));
  m.def("validate_orthogonal", &ValidateOrthogonal, py::arg("scenario"),
        py::arg("result"));

  m.def(
      "jain_fairness",
      [](const std::vector<double>& rates) { return JainFairness(rates); },
      py::arg("rates"));

  py::class_<PowerSolution>(m, "PowerSolution")
      .def_readonly("powers", &PowerSolution::powers)
      .def_readonly("z", &PowerSolution::z)
      .def_readonly("objective", &PowerSolution::objective)
      .def_readonly("duality_gap", &PowerSolution::duality_gap)
      .def_readonly("iterations", &PowerSolution::iterations)
      .def_readonly("converged", &PowerSolution::converged);

  m.def(
      "solve_power",
      [](std::vector<double> lambdas, std::vector<double> thresholds,
         double pmax, double bandwidth) {
        return Solve(MakeCluster(std::move(lambdas), std::move(thresholds),
                                 pmax, bandwidth));
      },
      py::arg("lambdas"), py::arg("thresholds"), py::arg("pmax"),
      py::arg("bandwidth") = 1.0);

  py::class_<GridPowerResult>(m, "GridPowerResult")
      .def_readonly("powers", &GridPowerResult::powers)
      .def_readonly("objective", &GridPowerResult::objective)
      .def_readonly("points_feasible", &GridPowerResult::points_feasible);

  m.def(
      "grid_power_oracle",
      [](std::vector<double> lambdas, std::vector<double> thresholds,
         double pmax, double step, double bandwidth) {
        return GridPowerOracle(MakeCluster(std::move(lambdas),
                                           std::move(thresholds), pmax,
                                           bandwidth),
                               step);
      },
      py::arg("lambdas"), py::arg("thresholds"), py::arg("pmax"),
      py::arg("step"), py::arg("bandwidth") = 1.0);

  m.def(
      "to_z", [](const std::vector<double>& p) { return ToZ(p); },
      py::arg("powers"));
  m.def(
      "from_z", [](const std::vector<double>& z) { return FromZ(z); },
      py::arg("z"));

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("seed", &TrialResult::seed)
      .def_property_readonly(
          "scheme", [](const TrialResult& r) { return SchemeName(r.scheme); })
      .def_readonly("sweep_value", &TrialResult::sweep_value)
      .def_readonly("sum_rate", &TrialResult::sum_rate)
      .def_readonly("fairness", &TrialResult::fairness)
      .def_readonly("satisfied_count", &TrialResult::satisfied_count)
      .def_readonly("runtime_s", &TrialResult::runtime_s)
      .def_readonly("error", &TrialResult::error)
      .def_readonly("violations", &TrialResult::violations)
      .def_readonly("sic_chain_gap", &TrialResult::sic_chain_gap);

  m.def(
      "run_experiment",
      [](const ScenarioConfig& base, int trials, const std::string& schemes,
         const std::string& sweep_variable, std::vector<double> sweep_values,
         double ratio, uint64_t seed, int workers, bool timing, bool check) {
        ExperimentSpec spec;
        spec.base = base;
        spec.trials = trials;
        spec.schemes = ParseSchemes(schemes);
        spec.sweep_variable = ParseSweepVariable(sweep_variable);
        spec.sweep_values = std::move(sweep_values);
        spec.mmtc_to_urllc_ratio = ratio;
        spec.master_seed = seed;
        spec.workers = workers;
        spec.record_runtime = timing;
        spec.check_constraints = check;
        py::gil_scoped_release release;
        return RunExperiment(spec);
      },
      py::arg("config"), py::arg("trials") = 100,
      py::arg("schemes") = "noma,ofdma,fast_ofdm",
      py::arg("sweep_variable") = "none",
      py::arg("sweep_values") = std::vector<double>{}, py::arg("ratio") = 3.0,
      py::arg("seed") = 1, py::arg("workers") = 1, py::arg("timing") = false,
      py::arg("check") = false);
  m.def("format_csv", &FormatCsv, py::arg("results"));

  py::class_<CheckOutcome>(m, "CheckOutcome")
      .def_readonly("name", &CheckOutcome::name)
      .def_readonly("cases", &CheckOutcome::cases)
      .def_readonly("failures", &CheckOutcome::failures)
      .def_readonly("detail", &CheckOutcome::detail)
      .def_property_readonly("passed", &CheckOutcome::passed);

  m.def(
      "run_self_checks",
      [](const ScenarioConfig& base, int instances, uint64_t seed) {
        py::gil_scoped_release release;
        return RunSelfChecks(base, instances, seed);
      },
      py::arg("config"), py::arg("instances") = 200, py::arg("seed") = 1);
}
