// Copyright 2026 The ProbDet Authors
//
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

#ifndef PROBDET_ROBUSTNESS_HPP_
#define PROBDET_ROBUSTNESS_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace probdet
{

// One metric's value on clean data plus a complete corruption x severity
// grid. values[c][s] holds corruption c at severity level s; every row must
// have the same number of severities.
struct PerformanceGrid
{
  std::string metric_name;
  double clean = 0.0;
  std::vector<std::vector<double>> values;
};

// Relative performance under corruption: the nested mean over corruptions
// (each averaged over its severities) divided by the clean value. Throws
// std::invalid_argument when clean <= 0, the grid is empty, or rows are
// ragged.
double rpc(const PerformanceGrid & grid);

// Named metric values from one evaluation run.
using MetricSet = std::map<std::string, double>;

// One rpc() per metric over a (corruption, severity) -> metrics table.
// Every cell must carry the same metric set as the clean run. A metric
// whose clean value is <= 0 yields an empty optional instead of failing the
// others. Severity levels per corruption are the map keys in ascending
// order; every corruption must cover the same number of severities.
std::map<std::string, std::optional<double>> rpc_suite(
  const std::map<std::pair<std::string, int>, MetricSet> & corrupted, const MetricSet & clean);

// CSV exchange format: header `corruption,severity,<metric1>,...` with one
// reserved row `clean,0,...` holding the clean values. Parsing validates
// completeness; errors carry the offending line number.
struct GridTable
{
  std::vector<std::string> metric_names;
  MetricSet clean;
  std::map<std::pair<std::string, int>, MetricSet> cells;
};

GridTable parse_grid_csv(std::istream & in);
void write_grid_csv(std::ostream & out, const GridTable & table);

}  // namespace probdet

#endif  // PROBDET_ROBUSTNESS_HPP_
