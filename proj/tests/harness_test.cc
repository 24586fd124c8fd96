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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nbnoma/error.h"
#include "nbnoma/harness.h"
#include "nbnoma/random.h"

namespace nbnoma {
namespace {

namespace fs = std::filesystem;

ExperimentSpec SmallSpec() {
  ExperimentSpec spec;
  spec.base.num_subcarriers = 12;
  spec.sweep_variable = SweepVariable::kTotalDevices;
  spec.sweep_values = {8, 16};
  spec.trials = 4;
  return spec;
}

std::string TempPath(const std::string& name) {
  return (fs::temp_directory_path() / ("nbnoma_test_" + name)).string();
}

TEST(SchemeTest, NamesRoundTrip) {
  for (Scheme s : {Scheme::kNoma, Scheme::kOfdma, Scheme::kFastOfdm}) {
    EXPECT_EQ(ParseScheme(SchemeName(s)), s);
  }
  EXPECT_EQ(ParseSchemes("noma,fast_ofdm"),
            (std::vector<Scheme>{Scheme::kNoma, Scheme::kFastOfdm}));
  EXPECT_THROW(ParseSchemes("noma,tdma"), NomaError);
  EXPECT_THROW(ParseSchemes("noma,noma"), NomaError);
}

TEST(ExpandValuesTest, Ellipsis) {
  EXPECT_EQ(ExpandValues("20,40,...,120"),
            (std::vector<double>{20, 40, 60, 80, 100, 120}));
  EXPECT_EQ(ExpandValues("1, 2.5"), (std::vector<double>{1, 2.5}));
  EXPECT_EQ(ExpandValues("0.5,1,...,2"), (std::vector<double>{0.5, 1, 1.5, 2}));
  EXPECT_THROW(ExpandValues("...,5"), NomaError);
  EXPECT_THROW(ExpandValues("1,2,...,6.5"), NomaError);
  EXPECT_THROW(ExpandValues("1,2,..."), NomaError);
  EXPECT_THROW(ExpandValues(""), NomaError);
}

TEST(ConfigForPointTest, DeviceCountComposition) {
  ExperimentSpec spec;
  spec.sweep_variable = SweepVariable::kTotalDevices;
  ScenarioConfig c = ConfigForPoint(spec, 96);
  EXPECT_EQ(c.num_urllc, 24);
  EXPECT_EQ(c.num_mmtc, 72);
  EXPECT_EQ(c.num_clusters, 48);
  c = ConfigForPoint(spec, 30);
  EXPECT_EQ(c.num_urllc, 8);  // round(7.5) away from zero
  EXPECT_EQ(c.num_mmtc, 22);
  EXPECT_EQ(c.num_clusters, 15);
  spec.sweep_variable = SweepVariable::kMaxRank;
  c = ConfigForPoint(spec, 4);
  EXPECT_EQ(c.max_rank, 4);
  EXPECT_EQ(c.num_clusters, 24);
  spec.sweep_variable = SweepVariable::kThresholdScale;
  c = ConfigForPoint(spec, 0.5);
  EXPECT_DOUBLE_EQ(c.urllc_rate_threshold_range.max_bps, 10e3);
  EXPECT_DOUBLE_EQ(c.mmtc_rate_threshold_range.min_bps, 50.0);
}

TEST(ValidateSpecTest, RejectsBadSpecs) {
  ExperimentSpec spec = SmallSpec();
  spec.trials = 0;
  EXPECT_THROW(ValidateSpec(spec), NomaError);
  spec = SmallSpec();
  spec.sweep_values.clear();
  EXPECT_THROW(ValidateSpec(spec), NomaError);
  spec = SmallSpec();
  spec.mmtc_to_urllc_ratio = 0.0;
  EXPECT_THROW(ValidateSpec(spec), NomaError);
  spec = SmallSpec();
  spec.sweep_values = {8.5};
  EXPECT_THROW(ValidateSpec(spec), NomaError);
}

TEST(RunExperimentTest, OneTrialOneScheme) {
  ExperimentSpec spec = SmallSpec();
  spec.sweep_values = {8};
  spec.trials = 1;
  spec.schemes = {Scheme::kOfdma};
  const auto results = RunExperiment(spec);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_TRUE(results[0].error.empty());
  EXPECT_EQ(results[0].seed, DeriveSeed(spec.master_seed, 8.0, 0));
}

TEST(RunExperimentTest, DeterministicAcrossRunsAndWorkers) {
  ExperimentSpec spec = SmallSpec();
  const std::string first = FormatCsv(RunExperiment(spec));
  EXPECT_EQ(FormatCsv(RunExperiment(spec)), first);
  spec.workers = 3;
  EXPECT_EQ(FormatCsv(RunExperiment(spec)), first);
}

TEST(RunExperimentTest, SchemesSharePairedScenarios) {
  ExperimentSpec spec = SmallSpec();
  const auto results = RunExperiment(spec);
  EXPECT_EQ(results.size(), 2u * 4u * 3u);
  // Every (value, seed) pair appears once per scheme.
  for (const TrialResult& r : results) {
    int partners = 0;
    for (const TrialResult& o : results) {
      partners += o.seed == r.seed && o.sweep_value == r.sweep_value;
    }
    EXPECT_EQ(partners, 3);
    EXPECT_TRUE(r.error.empty()) << r.error;
    if (r.fairness) {
      EXPECT_GE(*r.fairness, 0.0);
      EXPECT_LE(*r.fairness, 1.0);
    }
  }
}

TEST(RunExperimentTest, FailedTrialsAreRecorded) {
  ExperimentSpec spec;
  spec.base.num_urllc = 0;
  spec.base.num_mmtc = 3;
  spec.base.num_clusters = 2;
  spec.base.num_subcarriers = 4;
  spec.trials = 2;
  const auto results = RunExperiment(spec);
  ASSERT_EQ(results.size(), 6u);
  int failed = 0;
  for (const TrialResult& r : results) {
    if (r.scheme == Scheme::kNoma) {
      EXPECT_FALSE(r.error.empty());
      EXPECT_TRUE(std::isnan(r.sum_rate));
      ++failed;
    } else {
      EXPECT_TRUE(r.error.empty());
    }
  }
  EXPECT_EQ(failed, 2);
  const std::string csv = FormatCsv(results);
  EXPECT_NE(csv.find(",noma,3,nan,,,0"), std::string::npos);
  const auto cells = Summarize(results);
  for (const CellSummary& c : cells) {
    EXPECT_EQ(c.failures, c.scheme == Scheme::kNoma ? 2 : 0);
  }
}

TEST(CsvTest, HeaderAndSingleRow) {
  TrialResult r;
  r.seed = 7;
  r.scheme = Scheme::kOfdma;
  r.sweep_value = 96;
  r.sum_rate = 123456.789012345;
  r.fairness = 0.5;
  r.satisfied_count = 48;
  const std::string csv = FormatCsv({r});
  EXPECT_EQ(csv,
            "seed,scheme,sweep_value,sum_rate_bps,fairness,satisfied_count,"
            "runtime_s\n7,ofdma,96,123456.789012,0.5,48,0\n");
}

TEST(CsvTest, RowsAreSorted) {
  std::vector<TrialResult> rows(4);
  rows[0].sweep_value = 40, rows[0].scheme = Scheme::kNoma, rows[0].seed = 1;
  rows[1].sweep_value = 20, rows[1].scheme = Scheme::kOfdma, rows[1].seed = 2;
  rows[2].sweep_value = 20, rows[2].scheme = Scheme::kFastOfdm, rows[2].seed = 9;
  rows[3].sweep_value = 20, rows[3].scheme = Scheme::kOfdma, rows[3].seed = 1;
  const auto back = ParseCsv(FormatCsv(rows));
  ASSERT_EQ(back.size(), 4u);
  EXPECT_EQ(back[0].scheme, Scheme::kFastOfdm);
  EXPECT_EQ(back[1].seed, 1u);
  EXPECT_EQ(back[2].seed, 2u);
  EXPECT_EQ(back[3].sweep_value, 40.0);
}

TEST(CsvTest, RoundTripToTwelveDigits) {
  ExperimentSpec spec = SmallSpec();
  spec.record_runtime = true;
  const auto results = RunExperiment(spec);
  const std::string path = TempPath("roundtrip.csv");
  EmitCsv(results, path);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const auto back = ParseCsv(text.str());
  ASSERT_EQ(back.size(), results.size());
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 5e-12 * std::max(std::abs(a), std::abs(b));
  };
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].seed, results[i].seed);
    EXPECT_EQ(back[i].scheme, results[i].scheme);
    EXPECT_TRUE(close(back[i].sum_rate, results[i].sum_rate));
    EXPECT_EQ(back[i].fairness.has_value(), results[i].fairness.has_value());
    if (back[i].fairness) {
      EXPECT_TRUE(close(*back[i].fairness, *results[i].fairness));
    }
    EXPECT_EQ(back[i].satisfied_count, results[i].satisfied_count);
    EXPECT_TRUE(close(back[i].runtime_s, results[i].runtime_s));
  }
  fs::remove(path);
}

TEST(CsvTest, EmptyResultsCreateNoFile) {
  const std::string path = TempPath("empty.csv");
  fs::remove(path);
  try {
    EmitCsv({}, path);
    FAIL();
  } catch (const NomaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
  EXPECT_FALSE(fs::exists(path));
}

TEST(CsvTest, UnwritablePathIsIoFailure) {
  try {
    EmitCsv({TrialResult{}}, "/nonexistent-dir/out.csv");
    FAIL();
  } catch (const NomaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/out.csv"),
              std::string::npos);
  }
}

TEST(SummarizeTest, Examples) {
  MetricSummary s = SummarizeValues({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.stddev, 1.0);
  ASSERT_TRUE(s.half_width.has_value());
  EXPECT_NEAR(*s.half_width, 1.96 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(*s.half_width, 1.1316, 1e-4);

  s = SummarizeValues({4.2, 4.2, 4.2, 4.2});
  EXPECT_DOUBLE_EQ(s.mean, 4.2);
  EXPECT_EQ(*s.half_width, 0.0);

  s = SummarizeValues({7.0});
  EXPECT_DOUBLE_EQ(s.mean, 7.0);
  EXPECT_FALSE(s.half_width.has_value());

  EXPECT_THROW(SummarizeValues({}), NomaError);
}

TEST(SummarizeTest, OrderIndependentAndCompensated) {
  Rng rng(5);
  std::vector<double> v;
  for (int i = 0; i < 10000; ++i) v.push_back(rng.Uniform(0.0, 1e6));
  v.push_back(1e16);
  v.push_back(-1e16);
  const double mean = SummarizeValues(v).mean;
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(SummarizeValues(v).mean, mean);
  std::swap(v[0], v[5000]);
  EXPECT_EQ(SummarizeValues(v).mean, mean);

  // 1 + 1e-16 repeated cancels badly without compensation.
  std::vector<double> w(1000, 1e-16);
  w.push_back(1.0);
  EXPECT_DOUBLE_EQ(SummarizeValues(w).mean * 1001.0, 1.0 + 1e-13);
}

TEST(SummarizeTest, CellsPerSchemeAndValue) {
  const auto results = RunExperiment(SmallSpec());
  const auto cells = Summarize(results);
  ASSERT_EQ(cells.size(), 6u);
  for (const CellSummary& c : cells) {
    EXPECT_EQ(c.trials, 4);
    EXPECT_EQ(c.sum_rate.count, 4);
    EXPECT_TRUE(c.sum_rate.half_width.has_value());
  }
}

}  // namespace
}  // namespace nbnoma
