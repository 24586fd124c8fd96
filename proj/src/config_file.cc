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

#include "nbnoma/config_file.h"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "nbnoma/error.h"

namespace nbnoma {
namespace {

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const size_t begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const size_t end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void Fail(int line, const std::string& what) {
  throw NomaError(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(line) + ": " + what);
}

double ParseDouble(std::string_view text, int line) {
  const std::string s(Trim(text));
  if (s.empty()) Fail(line, "missing numeric value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) {
    Fail(line, "malformed number '" + s + "'");
  }
  return v;
}

long long ParseInteger(std::string_view text, int line) {
  const std::string_view s = Trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    Fail(line, "malformed integer '" + std::string(s) + "'");
  }
  return v;
}

int ParseCount(std::string_view text, int line) {
  const long long v = ParseInteger(text, line);
  if (v < 0 || v > 1'000'000) Fail(line, "count out of range");
  return static_cast<int>(v);
}

RateRange ParseRange(std::string_view text, int line) {
  std::string s(text);
  for (char& ch : s) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(s);
  std::string lo, hi, extra;
  if (!(in >> lo >> hi) || (in >> extra)) {
    Fail(line, "a range needs exactly two numbers");
  }
  return RateRange{ParseDouble(lo, line), ParseDouble(hi, line)};
}

}  // namespace

ScenarioConfig ParseConfig(std::string_view text) {
  ScenarioConfig config;
  bool clusters_given = false;
  std::set<std::string> seen;
  std::set<std::string> seen_quantity;  // noise_psd vs noise_psd_dbm, ...

  using Setter = std::function<void(std::string_view, int)>;
  const std::map<std::string, Setter> setters = {
      {"num_urllc", [&](auto v, int l) { config.num_urllc = ParseCount(v, l); }},
      {"num_mmtc", [&](auto v, int l) { config.num_mmtc = ParseCount(v, l); }},
      {"num_subcarriers",
       [&](auto v, int l) { config.num_subcarriers = ParseCount(v, l); }},
      {"num_clusters",
       [&](auto v, int l) {
         if (Trim(v) == "auto") return;
         config.num_clusters = ParseCount(v, l);
         clusters_given = true;
       }},
      {"max_rank", [&](auto v, int l) { config.max_rank = ParseCount(v, l); }},
      {"subcarrier_bandwidth",
       [&](auto v, int l) { config.subcarrier_bandwidth = ParseDouble(v, l); }},
      {"rb_bandwidth",
       [&](auto v, int l) { config.rb_bandwidth = ParseDouble(v, l); }},
      {"cell_radius",
       [&](auto v, int l) { config.cell_radius = ParseDouble(v, l); }},
      {"pathloss_exponent",
       [&](auto v, int l) { config.pathloss_exponent = ParseDouble(v, l); }},
      {"noise_psd", [&](auto v, int l) { config.noise_psd = ParseDouble(v, l); }},
      {"noise_psd_dbm",
       [&](auto v, int l) { config.noise_psd = DbmToWatts(ParseDouble(v, l)); }},
      {"power_budget_urllc",
       [&](auto v, int l) { config.power_budget_urllc = ParseDouble(v, l); }},
      {"power_budget_urllc_dbm",
       [&](auto v, int l) {
         config.power_budget_urllc = DbmToWatts(ParseDouble(v, l));
       }},
      {"power_budget_mmtc",
       [&](auto v, int l) { config.power_budget_mmtc = ParseDouble(v, l); }},
      {"power_budget_mmtc_dbm",
       [&](auto v, int l) {
         config.power_budget_mmtc = DbmToWatts(ParseDouble(v, l));
       }},
      {"urllc_rate_threshold_range",
       [&](auto v, int l) {
         config.urllc_rate_threshold_range = ParseRange(v, l);
       }},
      {"mmtc_rate_threshold_range",
       [&](auto v, int l) {
         config.mmtc_rate_threshold_range = ParseRange(v, l);
       }},
      {"min_distance",
       [&](auto v, int l) { config.min_distance = ParseDouble(v, l); }},
      {"rng_seed",
       [&](auto v, int l) {
         const long long seed = ParseInteger(v, l);
         if (seed < 0) Fail(l, "rng_seed must be non-negative");
         config.rng_seed = static_cast<uint64_t>(seed);
       }},
  };

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) Fail(line_no, "expected 'key = value'");
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) Fail(line_no, "unknown key '" + key + "'");
    std::string quantity = key;
    if (quantity.ends_with("_dbm")) quantity.resize(quantity.size() - 4);
    if (!seen.insert(key).second || !seen_quantity.insert(quantity).second) {
      Fail(line_no, "duplicate key '" + key + "'");
    }
    it->second(value, line_no);
  }

  if (!clusters_given && config.max_rank > 0) {
    config.num_clusters =
        (config.num_devices() + config.max_rank - 1) / config.max_rank;
    if (config.num_clusters < 1) config.num_clusters = 1;
  }
  ValidateConfig(config);
  return config;
}

ScenarioConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw NomaError(ErrorCode::kIoFailure, "cannot open config '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string FormatConfig(const ScenarioConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "num_urllc = " << c.num_urllc << "\n"
      << "num_mmtc = " << c.num_mmtc << "\n"
      << "num_subcarriers = " << c.num_subcarriers << "\n"
      << "num_clusters = " << c.num_clusters << "\n"
      << "max_rank = " << c.max_rank << "\n"
      << "subcarrier_bandwidth = " << c.subcarrier_bandwidth << "\n"
      << "rb_bandwidth = " << c.rb_bandwidth << "\n"
      << "cell_radius = " << c.cell_radius << "\n"
      << "pathloss_exponent = " << c.pathloss_exponent << "\n"
      << "noise_psd = " << c.noise_psd << "\n"
      << "power_budget_urllc = " << c.power_budget_urllc << "\n"
      << "power_budget_mmtc = " << c.power_budget_mmtc << "\n"
      << "urllc_rate_threshold_range = " << c.urllc_rate_threshold_range.min_bps
      << ", " << c.urllc_rate_threshold_range.max_bps << "\n"
      << "mmtc_rate_threshold_range = " << c.mmtc_rate_threshold_range.min_bps
      << ", " << c.mmtc_rate_threshold_range.max_bps << "\n"
      << "min_distance = " << c.min_distance << "\n"
      << "rng_seed = " << c.rng_seed << "\n";
  return out.str();
}

}  // namespace nbnoma
