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

#include "nbnoma/harness.h"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>
#include <thread>
#include <tuple>

#include "nbnoma/allocation.h"
#include "nbnoma/baselines.h"
#include "nbnoma/clustering.h"
#include "nbnoma/error.h"
#include "nbnoma/random.h"
#include "nbnoma/rate_model.h"

namespace nbnoma {
namespace {

constexpr char kCsvHeader[] =
    "seed,scheme,sweep_value,sum_rate_bps,fairness,satisfied_count,runtime_s";

[[noreturn]] void Invalid(const std::string& what) {
  throw NomaError(ErrorCode::kInvalidConfig, what);
}

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string_view::npos
                                      ? std::string_view::npos
                                      : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

double ParseNumber(std::string_view s) {
  s = Trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    Invalid("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

auto SortKey(const TrialResult& r) {
  return std::make_tuple(r.sweep_value, std::string_view(SchemeName(r.scheme)),
                         r.seed);
}

void SortResults(std::vector<TrialResult>& results) {
  std::stable_sort(results.begin(), results.end(),
                   [](const TrialResult& a, const TrialResult& b) {
                     return SortKey(a) < SortKey(b);
                   });
}

void Record(TrialResult& row, const RateReport& report) {
  row.sum_rate = report.sum_rate;
  row.fairness = report.fairness;
  row.satisfied_count = report.satisfied_count;
}

void NoteViolations(TrialResult& row, const std::vector<Violation>& v) {
  row.violations = static_cast<int>(v.size());
  if (!v.empty()) row.first_violation = v.front().constraint + ": " + v.front().detail;
}

}  // namespace

const char* SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kNoma:
      return "noma";
    case Scheme::kOfdma:
      return "ofdma";
    case Scheme::kFastOfdm:
      return "fast_ofdm";
  }
  return "?";
}

Scheme ParseScheme(std::string_view name) {
  name = Trim(name);
  if (name == "noma") return Scheme::kNoma;
  if (name == "ofdma") return Scheme::kOfdma;
  if (name == "fast_ofdm") return Scheme::kFastOfdm;
  Invalid("unknown scheme '" + std::string(name) + "'");
}

std::vector<Scheme> ParseSchemes(std::string_view list) {
  std::vector<Scheme> out;
  for (std::string_view item : Split(list, ',')) {
    const Scheme s = ParseScheme(item);
    if (std::find(out.begin(), out.end(), s) != out.end()) {
      Invalid("scheme listed twice: " + std::string(Trim(item)));
    }
    out.push_back(s);
  }
  return out;
}

const char* SweepVariableName(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kNone:
      return "none";
    case SweepVariable::kTotalDevices:
      return "total_devices";
    case SweepVariable::kMaxRank:
      return "k_max";
    case SweepVariable::kThresholdScale:
      return "threshold_scale";
  }
  return "?";
}

SweepVariable ParseSweepVariable(std::string_view name) {
  name = Trim(name);
  if (name == "none") return SweepVariable::kNone;
  if (name == "total_devices") return SweepVariable::kTotalDevices;
  if (name == "k_max" || name == "max_rank") return SweepVariable::kMaxRank;
  if (name == "threshold_scale") return SweepVariable::kThresholdScale;
  Invalid("unknown sweep variable '" + std::string(name) + "'");
}

ScenarioConfig ConfigForPoint(const ExperimentSpec& spec, double value) {
  ScenarioConfig c = spec.base;
  auto as_count = [&](const char* what) {
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e9) {
      Invalid(std::string(what) + " must be a non-negative integer, got " +
              Num(value));
    }
    return static_cast<int>(value);
  };
  auto tight_clusters = [&c]() {
    c.num_clusters = (c.num_devices() + c.max_rank - 1) / c.max_rank;
  };
  switch (spec.sweep_variable) {
    case SweepVariable::kNone:
      break;
    case SweepVariable::kTotalDevices: {
      const int n = as_count("total_devices");
      c.num_urllc = static_cast<int>(
          std::lround(n / (1.0 + spec.mmtc_to_urllc_ratio)));
      c.num_mmtc = n - c.num_urllc;
      if (c.max_rank > 0) tight_clusters();
      break;
    }
    case SweepVariable::kMaxRank:
      c.max_rank = as_count("k_max");
      if (c.max_rank > 0) tight_clusters();
      break;
    case SweepVariable::kThresholdScale:
      if (!(value >= 0.0) || !std::isfinite(value)) {
        Invalid("threshold_scale must be non-negative");
      }
      c.urllc_rate_threshold_range.min_bps *= value;
      c.urllc_rate_threshold_range.max_bps *= value;
      c.mmtc_rate_threshold_range.min_bps *= value;
      c.mmtc_rate_threshold_range.max_bps *= value;
      break;
  }
  return c;
}

void ValidateSpec(const ExperimentSpec& spec) {
  if (spec.trials < 1) Invalid("trials must be at least 1");
  if (spec.workers < 1) Invalid("workers must be at least 1");
  if (spec.schemes.empty()) Invalid("no schemes requested");
  if (!(spec.mmtc_to_urllc_ratio > 0.0) ||
      !std::isfinite(spec.mmtc_to_urllc_ratio)) {
    Invalid("mMTC-to-URLLC ratio must be positive");
  }
  if (spec.sweep_variable == SweepVariable::kNone) {
    ValidateConfig(spec.base);
    return;
  }
  if (spec.sweep_values.empty()) Invalid("sweep values are empty");
  for (double v : spec.sweep_values) {
    try {
      ValidateConfig(ConfigForPoint(spec, v));
    } catch (const NomaError& e) {
      Invalid("sweep value " + Num(v) + ": " + e.what());
    }
  }
}

std::vector<TrialResult> RunTrial(const Scenario& scenario,
                                  const std::vector<Scheme>& schemes,
                                  bool record_runtime,
                                  bool check_constraints) {
  std::vector<TrialResult> rows;
  for (Scheme scheme : schemes) {
    TrialResult row;
    row.scheme = scheme;
    row.seed = scenario.config().rng_seed;
    row.num_devices = scenario.num_devices();
    const auto start = std::chrono::steady_clock::now();
    try {
      switch (scheme) {
        case Scheme::kNoma: {
          const ClusterAssignment assignment = BuildClusters(scenario);
          const AllocationResult a = Allocate(scenario, assignment);
          Record(row, a.report);
          if (check_constraints) {
            NoteViolations(row,
                           Validate(scenario, assignment, a.map, a.powers));
            row.sic_chain_gap =
                SicChainGap(scenario, assignment, a.map, a.powers);
          }
          break;
        }
        case Scheme::kOfdma: {
          const OrthogonalResult o = OfdmaAllocate(scenario);
          Record(row, o.report);
          if (check_constraints) {
            NoteViolations(row, ValidateOrthogonal(scenario, o));
          }
          break;
        }
        case Scheme::kFastOfdm: {
          const OrthogonalResult o = FastOfdmAllocate(scenario);
          Record(row, o.report);
          if (check_constraints) {
            NoteViolations(row, ValidateOrthogonal(SplitTones(scenario), o));
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.sum_rate = std::nan("");
      row.fairness.reset();
      row.satisfied_count = 0;
    }
    if (record_runtime) {
      row.runtime_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TrialResult> RunExperiment(const ExperimentSpec& spec) {
  ValidateSpec(spec);
  std::vector<double> values = spec.sweep_values;
  if (spec.sweep_variable == SweepVariable::kNone) {
    values = {static_cast<double>(spec.base.num_devices())};
  }
  const size_t num_tasks = values.size() * static_cast<size_t>(spec.trials);
  std::vector<std::vector<TrialResult>> slots(num_tasks);

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t task = next.fetch_add(1);
      if (task >= num_tasks) return;
      const double value = values[task / spec.trials];
      const uint64_t trial = task % spec.trials;
      const uint64_t seed = DeriveSeed(spec.master_seed, value, trial);
      ScenarioConfig config = spec.sweep_variable == SweepVariable::kNone
                                  ? spec.base
                                  : ConfigForPoint(spec, value);
      config.rng_seed = seed;
      std::vector<TrialResult> rows;
      try {
        const Scenario scenario = GenerateScenario(config);
        rows = RunTrial(scenario, spec.schemes, spec.record_runtime,
                        spec.check_constraints);
      } catch (const std::exception& e) {
        for (Scheme scheme : spec.schemes) {
          TrialResult row;
          row.scheme = scheme;
          row.seed = seed;
          row.sum_rate = std::nan("");
          row.error = e.what();
          rows.push_back(std::move(row));
        }
      }
      for (TrialResult& row : rows) row.sweep_value = value;
      slots[task] = std::move(rows);
    }
  };
  const int threads =
      static_cast<int>(std::min<size_t>(spec.workers, num_tasks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<TrialResult> results;
  results.reserve(num_tasks * spec.schemes.size());
  for (auto& rows : slots) {
    for (TrialResult& row : rows) results.push_back(std::move(row));
  }
  SortResults(results);
  return results;
}

std::string FormatCsv(std::vector<TrialResult> results) {
  SortResults(results);
  std::string out = kCsvHeader;
  out += '\n';
  for (const TrialResult& r : results) {
    out += std::to_string(r.seed);
    out += ',';
    out += SchemeName(r.scheme);
    out += ',';
    out += Num(r.sweep_value);
    out += ',';
    if (r.error.empty()) {
      out += Num(r.sum_rate);
      out += ',';
      if (r.fairness) out += Num(*r.fairness);
      out += ',';
      out += std::to_string(r.satisfied_count);
    } else {
      out += "nan,,";
    }
    out += ',';
    out += Num(r.runtime_s);
    out += '\n';
  }
  return out;
}

void EmitCsv(const std::vector<TrialResult>& results, const std::string& path) {
  if (results.empty()) {
    throw NomaError(ErrorCode::kDegenerateInput, "no results to write");
  }
  const std::string text = FormatCsv(results);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw NomaError(ErrorCode::kIoFailure,
                    "cannot open " + path + " for writing: " +
                        std::generic_category().message(errno));
  }
  file << text;
  file.close();
  if (!file) {
    throw NomaError(ErrorCode::kIoFailure, "write to " + path + " failed");
  }
}

std::vector<TrialResult> ParseCsv(std::string_view text) {
  std::vector<TrialResult> out;
  int line_no = 0;
  for (std::string_view line : Split(text, '\n')) {
    ++line_no;
    line = Trim(line);
    if (line_no == 1) {
      if (line != kCsvHeader) Invalid("unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = Split(line, ',');
    if (f.size() != 7) {
      Invalid("line " + std::to_string(line_no) + ": expected 7 fields");
    }
    TrialResult r;
    uint64_t seed = 0;
    const auto [p, ec] =
        std::from_chars(f[0].data(), f[0].data() + f[0].size(), seed);
    if (ec != std::errc() || p != f[0].data() + f[0].size()) {
      Invalid("line " + std::to_string(line_no) + ": bad seed");
    }
    r.seed = seed;
    r.scheme = ParseScheme(f[1]);
    r.sweep_value = ParseNumber(f[2]);
    if (f[3] == "nan") {
      r.sum_rate = std::nan("");
      r.error = "failed";
    } else {
      r.sum_rate = ParseNumber(f[3]);
      if (!f[4].empty()) r.fairness = ParseNumber(f[4]);
      r.satisfied_count = static_cast<int>(ParseNumber(f[5]));
    }
    r.runtime_s = ParseNumber(f[6]);
    out.push_back(std::move(r));
  }
  if (line_no == 0) Invalid("empty CSV");
  return out;
}

MetricSummary SummarizeValues(std::vector<double> values) {
  if (values.empty()) {
    throw NomaError(ErrorCode::kDegenerateInput, "no values to summarize");
  }
  std::sort(values.begin(), values.end());
  auto neumaier = [](const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    return sum + comp;
  };
  MetricSummary s;
  s.count = static_cast<int>(values.size());
  s.mean = neumaier(values) / s.count;
  if (s.count >= 2) {
    std::vector<double> sq(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
      sq[i] = (values[i] - s.mean) * (values[i] - s.mean);
    }
    std::sort(sq.begin(), sq.end());
    s.stddev = std::sqrt(neumaier(sq) / (s.count - 1));
    s.half_width = 1.96 * s.stddev / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

std::vector<CellSummary> Summarize(const std::vector<TrialResult>& results) {
  std::vector<TrialResult> sorted = results;
  SortResults(sorted);
  std::vector<CellSummary> out;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    std::vector<double> rate, fair, sat, time;
    CellSummary cell;
    cell.scheme = sorted[i].scheme;
    cell.sweep_value = sorted[i].sweep_value;
    for (; j < sorted.size() && sorted[j].scheme == cell.scheme &&
           sorted[j].sweep_value == cell.sweep_value;
         ++j) {
      const TrialResult& r = sorted[j];
      ++cell.trials;
      if (!r.error.empty()) {
        ++cell.failures;
        continue;
      }
      rate.push_back(r.sum_rate);
      if (r.fairness) fair.push_back(*r.fairness);
      sat.push_back(r.satisfied_count);
      time.push_back(r.runtime_s);
    }
    if (!rate.empty()) {
      cell.sum_rate = SummarizeValues(rate);
      cell.satisfied = SummarizeValues(sat);
      cell.runtime = SummarizeValues(time);
    }
    if (!fair.empty()) cell.fairness = SummarizeValues(fair);
    out.push_back(std::move(cell));
    i = j;
  }
  return out;
}

std::vector<double> ExpandValues(std::string_view text) {
  const auto items = Split(text, ',');
  std::vector<double> out;
  for (size_t i = 0; i < items.size(); ++i) {
    const std::string_view item = Trim(items[i]);
    if (item != "...") {
      out.push_back(ParseNumber(item));
      continue;
    }
    if (out.size() < 2 || i + 1 >= items.size()) {
      Invalid("'...' needs two values before it and one after");
    }
    const double a = out[out.size() - 2];
    const double b = out.back();
    const double end = ParseNumber(items[i + 1]);
    const double step = b - a;
    if (!(step != 0.0) || (end - b) / step < 0.0) {
      Invalid("'...' step does not reach " + Num(end));
    }
    const double count = (end - a) / step;
    const long long last = std::llround(count);
    if (std::abs(count - static_cast<double>(last)) > 1e-9 * std::max(1.0, count)) {
      Invalid("'...' end " + Num(end) + " is not on the step grid");
    }
    // a and b are terms 0 and 1; the end value is the next item.
    for (long long k = 2; k < last; ++k) {
      out.push_back(a + static_cast<double>(k) * step);
    }
  }
  if (out.empty()) Invalid("no values");
  return out;
}

}  // namespace nbnoma
