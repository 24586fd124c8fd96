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

// nbnoma command-line tool.
//
//   nbnoma run --config cell.conf --out results.csv [--trials N] [--seed N]
//              [--schemes noma,ofdma,fast_ofdm] [--workers N]
//   nbnoma sweep --config cell.conf --var total_devices
//                --values 20,40,...,120 --out sweep.csv
//   nbnoma validate --config cell.conf
//   nbnoma solve-power --lambdas 1,2 --thresholds 0,0 --pmax 1
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 validation
// failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbnoma/config_file.h"
#include "nbnoma/error.h"
#include "nbnoma/harness.h"
#include "nbnoma/oracle.h"
#include "nbnoma/power_opt.h"
#include "nbnoma/self_check.h"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kValidation = 3;

struct RunOptions {
  std::string config;
  std::string out;
  int trials = 100;
  uint64_t seed = 1;
  std::string schemes = "noma,ofdma,fast_ofdm";
  int workers = 1;
  bool timing = false;
  bool check = false;
  // sweep only
  std::string var = "total_devices";
  std::string values;
  double ratio = 3.0;
};

void AddRunOptions(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "scenario config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "CSV output path")->required();
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--schemes", o.schemes, "comma-separated scheme list");
  cmd->add_option("--workers", o.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", o.timing,
                "record wall time per scheme (output no longer reproducible)");
  cmd->add_flag("--check", o.check,
                "validate every allocation and fail on violations");
}

void PrintSummary(const std::vector<nbnoma::TrialResult>& results) {
  std::printf("%-10s %12s %16s %10s %10s %6s\n", "scheme", "sweep_value",
              "sum_rate_bps", "fairness", "satisfied", "fail");
  for (const nbnoma::CellSummary& c : nbnoma::Summarize(results)) {
    std::printf("%-10s %12.6g %16.6g %10.4f %10.2f %6d\n",
                nbnoma::SchemeName(c.scheme), c.sweep_value, c.sum_rate.mean,
                c.fairness.mean, c.satisfied.mean, c.failures);
  }
}

int Execute(const nbnoma::ExperimentSpec& spec, const std::string& out) {
  const std::vector<nbnoma::TrialResult> results = nbnoma::RunExperiment(spec);
  nbnoma::EmitCsv(results, out);
  PrintSummary(results);
  int failed = 0, violated = 0;
  for (const nbnoma::TrialResult& r : results) {
    if (!r.error.empty()) {
      if (failed++ == 0) std::cerr << "trial failed: " << r.error << "\n";
    }
    if (r.violations > 0 || r.sic_chain_gap > 1e-9) {
      if (violated++ == 0) {
        std::cerr << "constraint violation (seed " << r.seed
                  << "): " << r.first_violation << "\n";
      }
    }
  }
  if (failed > 0) {
    std::cerr << failed << " of " << results.size() << " trials failed\n";
    return kRuntime;
  }
  if (violated > 0) {
    std::cerr << violated << " allocations violated constraints\n";
    return kValidation;
  }
  return kOk;
}

nbnoma::ExperimentSpec BaseSpec(const RunOptions& o) {
  nbnoma::ExperimentSpec spec;
  spec.base = nbnoma::LoadConfig(o.config);
  spec.trials = o.trials;
  spec.master_seed = o.seed;
  spec.schemes = nbnoma::ParseSchemes(o.schemes);
  spec.workers = o.workers;
  spec.record_runtime = o.timing;
  spec.check_constraints = o.check;
  spec.mmtc_to_urllc_ratio = o.ratio;
  return spec;
}

int RunCommand(const RunOptions& o) {
  return Execute(BaseSpec(o), o.out);
}

int SweepCommand(const RunOptions& o) {
  nbnoma::ExperimentSpec spec = BaseSpec(o);
  spec.sweep_variable = nbnoma::ParseSweepVariable(o.var);
  spec.sweep_values = nbnoma::ExpandValues(o.values);
  return Execute(spec, o.out);
}

int ValidateCommand(const std::string& config_path, int instances,
                    uint64_t seed) {
  nbnoma::ScenarioConfig config;
  try {
    config = nbnoma::LoadConfig(config_path);
  } catch (const nbnoma::NomaError& e) {
    std::cout << "FAIL config " << e.what() << "\n";
    return kValidation;
  }
  std::cout << "PASS config " << config_path << "\n";
  bool ok = true;
  for (const nbnoma::CheckOutcome& c :
       nbnoma::RunSelfChecks(config, instances, seed)) {
    ok = ok && c.passed();
    std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name << " "
              << c.cases - c.failures << "/" << c.cases << " " << c.detail
              << "\n";
  }
  return ok ? kOk : kValidation;
}

struct PowerOptions {
  std::string lambdas;
  std::string thresholds;
  double pmax = 0.0;
  double bandwidth = 1.0;
};

int SolvePowerCommand(const PowerOptions& o) {
  nbnoma::OrderedCluster cluster;
  cluster.lambdas = nbnoma::ExpandValues(o.lambdas);
  cluster.thresholds = nbnoma::ExpandValues(o.thresholds);
  cluster.total_budget = o.pmax;
  cluster.bandwidth_factor = o.bandwidth;
  nbnoma::ValidateCluster(cluster);

  const nbnoma::PowerSolution s = nbnoma::Solve(cluster);
  std::printf("user lambda threshold_bps power_W Z_W\n");
  for (int j = 0; j < cluster.size(); ++j) {
    std::printf("%d %.12g %.12g %.12g %.12g\n", j + 1, cluster.lambdas[j],
                cluster.thresholds[j], s.powers[j], s.z[j]);
  }
  std::printf("objective_bps %.12g\n", s.objective);
  std::printf("duality_gap_bps %.3g\n", s.duality_gap);
  std::printf("iterations %d\n", s.iterations);
  if (cluster.size() <= nbnoma::kGridMaxUsers) {
    const nbnoma::GridPowerResult g =
        nbnoma::GridPowerOracle(cluster, cluster.total_budget / 1000.0);
    std::printf("grid_objective_bps %.12g\n", g.objective);
    std::printf("oracle_relative_gap %.3g\n",
                (s.objective - g.objective) / std::abs(g.objective));
  } else {
    std::printf("grid_objective_bps n/a (more than %d users)\n",
                nbnoma::kGridMaxUsers);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA clustering and resource allocation for NB-IoT uplinks"};
  app.require_subcommand(1);

  RunOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Monte Carlo run on one config");
  AddRunOptions(run, run_opts);

  RunOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo parameter sweep");
  AddRunOptions(sweep, sweep_opts);
  sweep->add_option("--var", sweep_opts.var,
                    "total_devices, k_max, threshold_scale or none");
  sweep->add_option("--values", sweep_opts.values,
                    "sweep values, e.g. 20,40,...,120")
      ->required();
  sweep->add_option("--ratio", sweep_opts.ratio,
                    "mMTC to URLLC ratio for device-count sweeps")
      ->check(CLI::PositiveNumber);

  std::string validate_config;
  int validate_instances = 200;
  uint64_t validate_seed = 1;
  CLI::App* validate =
      app.add_subcommand("validate", "oracle and invariant checks");
  validate->add_option("--config", validate_config, "scenario config file")
      ->required();
  validate->add_option("--instances", validate_instances,
                       "random tiny instances")
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", validate_seed, "seed");

  PowerOptions power_opts;
  CLI::App* solve_power =
      app.add_subcommand("solve-power", "solve one cluster's power problem");
  solve_power
      ->add_option("--lambdas", power_opts.lambdas,
                   "normalized gains |h|^2/(N0 W), ascending, comma-separated")
      ->required();
  solve_power
      ->add_option("--thresholds", power_opts.thresholds,
                   "rate thresholds in bps, comma-separated")
      ->required();
  solve_power->add_option("--pmax", power_opts.pmax, "cluster budget in W")
      ->required();
  solve_power->add_option("--bandwidth", power_opts.bandwidth,
                          "bandwidth factor in Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return RunCommand(run_opts);
    if (*sweep) return SweepCommand(sweep_opts);
    if (*validate) {
      return ValidateCommand(validate_config, validate_instances,
                             validate_seed);
    }
    if (*solve_power) return SolvePowerCommand(power_opts);
  } catch (const nbnoma::NomaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == nbnoma::ErrorCode::kInvalidConfig ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
