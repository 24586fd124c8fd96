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

#ifndef NBNOMA_HARNESS_H_
#define NBNOMA_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbnoma/scenario.h"

namespace nbnoma {

enum class Scheme { kNoma, kOfdma, kFastOfdm };

// "noma", "ofdma", "fast_ofdm".
const char* SchemeName(Scheme scheme);
// Throws kInvalidConfig for unknown names.
Scheme ParseScheme(std::string_view name);
// Comma-separated list of scheme names.
std::vector<Scheme> ParseSchemes(std::string_view list);

enum class SweepVariable {
  kNone,            // base config as is; the CSV records U+M
  kTotalDevices,    // U = round(N / (1 + ratio)), M = N - U
  kMaxRank,         // k_max
  kThresholdScale,  // multiplies both rate-threshold ranges
};

const char* SweepVariableName(SweepVariable variable);
SweepVariable ParseSweepVariable(std::string_view name);

struct ExperimentSpec {
  ScenarioConfig base;
  SweepVariable sweep_variable = SweepVariable::kNone;
  std::vector<double> sweep_values;  // ignored for kNone
  int trials = 100;
  std::vector<Scheme> schemes = {Scheme::kNoma, Scheme::kOfdma,
                                 Scheme::kFastOfdm};
  double mmtc_to_urllc_ratio = 3.0;
  uint64_t master_seed = 1;
  int workers = 1;
  // Measure wall time per scheme. Off by default so that output is a pure
  // function of the ExperimentSpec.
  bool record_runtime = false;
  // Run Validate / ValidateOrthogonal and the SIC chain check on every
  // produced allocation.
  bool check_constraints = false;
};

// Throws kInvalidConfig for trials < 1, an empty sweep, ratio <= 0,
// workers < 1, no schemes, or a sweep point with an invalid config.
void ValidateSpec(const ExperimentSpec& spec);

// Config of one sweep point. Device-count and k_max sweeps also reset the
// cluster count to ceil(N / k_max).
ScenarioConfig ConfigForPoint(const ExperimentSpec& spec, double value);

struct TrialResult {
  uint64_t seed = 0;
  Scheme scheme = Scheme::kNoma;
  double sweep_value = 0.0;
  double sum_rate = 0.0;           // bps
  std::optional<double> fairness;  // empty when every rate is 0
  int satisfied_count = 0;
  double runtime_s = 0.0;
  std::string error;  // nonempty for a failed trial; metrics are then unset

  // Filled when check_constraints is set.
  int violations = 0;
  std::string first_violation;
  double sic_chain_gap = 0.0;
  int num_devices = 0;
};

// Evaluates every scheme on one scenario.
std::vector<TrialResult> RunTrial(const Scenario& scenario,
                                  const std::vector<Scheme>& schemes,
                                  bool record_runtime, bool check_constraints);

// All (sweep value, trial) pairs, each on a scenario seeded by
// DeriveSeed(master_seed, value, trial) and shared by every scheme. Trials
// run on `workers` threads; the result is sorted like the CSV.
std::vector<TrialResult> RunExperiment(const ExperimentSpec& spec);

// CSV with header
//   seed,scheme,sweep_value,sum_rate_bps,fairness,satisfied_count,runtime_s
// rows sorted by (sweep_value, scheme name, seed), numbers in %.12g. Failed
// trials keep their row with sum_rate_bps = nan and empty metrics.
std::string FormatCsv(std::vector<TrialResult> results);

// Writes FormatCsv to `path`. Throws kDegenerateInput (and creates nothing)
// for empty results, kIoFailure if the file cannot be written.
void EmitCsv(const std::vector<TrialResult>& results, const std::string& path);

// Inverse of FormatCsv; throws kInvalidConfig on malformed input.
std::vector<TrialResult> ParseCsv(std::string_view text);

struct MetricSummary {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;                // sample standard deviation
  std::optional<double> half_width;  // 1.96 s / sqrt(n); empty for n < 2
};

// Mean by compensated summation over the sorted values, so the result does
// not depend on input order. Throws kDegenerateInput for an empty list.
MetricSummary SummarizeValues(std::vector<double> values);

struct CellSummary {
  Scheme scheme = Scheme::kNoma;
  double sweep_value = 0.0;
  int trials = 0;
  int failures = 0;
  MetricSummary sum_rate;
  MetricSummary fairness;  // over trials that have a fairness value
  MetricSummary satisfied;
  MetricSummary runtime;
};

// Per (scheme, sweep value) statistics of the successful trials, ordered like
// the CSV.
std::vector<CellSummary> Summarize(const std::vector<TrialResult>& results);

// Expands "20,40,...,120": an ellipsis repeats the step of the two values
// before it up to the value after it. Throws kInvalidConfig.
std::vector<double> ExpandValues(std::string_view text);

}  // namespace nbnoma

#endif  // NBNOMA_HARNESS_H_
