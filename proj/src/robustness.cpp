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

#include "probdet/robustness.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace probdet
{
namespace
{

std::string format_real(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_real(const std::string & text, std::size_t line_no)
{
  errno = 0;
  char * end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error(
      "grid csv line " + std::to_string(line_no) + ": bad numeric value '" + text + "'");
  }
  return v;
}

long parse_int(const std::string & text, std::size_t line_no)
{
  errno = 0;
  char * end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error(
      "grid csv line " + std::to_string(line_no) + ": bad severity '" + text + "'");
  }
  return v;
}

}  // namespace

double rpc(const PerformanceGrid & grid)
{
  if (grid.clean <= 0.0) {
    throw std::invalid_argument("rpc: clean performance must be positive");
  }
  if (grid.values.empty()) {
    throw std::invalid_argument("rpc: empty corruption grid");
  }
  const std::size_t severities = grid.values.front().size();
  if (severities == 0) {
    throw std::invalid_argument("rpc: corruption rows must have at least one severity");
  }
  double corruption_mean_sum = 0.0;
  for (const std::vector<double> & row : grid.values) {
    if (row.size() != severities) {
      throw std::invalid_argument("rpc: ragged corruption grid");
    }
    double row_sum = 0.0;
    for (double v : row) {
      row_sum += v;
    }
    corruption_mean_sum += row_sum / static_cast<double>(severities);
  }
  return corruption_mean_sum / static_cast<double>(grid.values.size()) / grid.clean;
}

std::map<std::string, std::optional<double>> rpc_suite(
  const std::map<std::pair<std::string, int>, MetricSet> & corrupted, const MetricSet & clean)
{
  if (corrupted.empty()) {
    throw std::invalid_argument("rpc_suite: no corrupted cells");
  }

  // Every corruption must cover the same severity set, and every cell the
  // same metric names as the clean run.
  std::map<std::string, std::set<int>> severities_by_corruption;
  for (const auto & [key, metrics] : corrupted) {
    severities_by_corruption[key.first].insert(key.second);
    if (metrics.size() != clean.size()) {
      throw std::invalid_argument("rpc_suite: cell metric set differs from clean");
    }
    for (const auto & [name, value] : clean) {
      (void)value;
      if (metrics.find(name) == metrics.end()) {
        throw std::invalid_argument("rpc_suite: cell missing metric '" + name + "'");
      }
    }
  }
  std::set<int> all_severities;
  for (const auto & [name, set] : severities_by_corruption) {
    (void)name;
    all_severities.insert(set.begin(), set.end());
  }
  std::string missing;
  for (const auto & [name, set] : severities_by_corruption) {
    for (int s : all_severities) {
      if (set.find(s) == set.end()) {
        if (!missing.empty()) {
          missing += ", ";
        }
        missing += name + ".s" + std::to_string(s);
      }
    }
  }
  if (!missing.empty()) {
    throw std::invalid_argument("rpc_suite: incomplete grid, missing cells: " + missing);
  }

  std::map<std::string, std::optional<double>> out;
  for (const auto & [metric, clean_value] : clean) {
    if (clean_value <= 0.0) {
      out[metric] = std::nullopt;
      continue;
    }
    PerformanceGrid grid;
    grid.metric_name = metric;
    grid.clean = clean_value;
    for (const auto & [corruption, severity_set] : severities_by_corruption) {
      std::vector<double> row;
      row.reserve(severity_set.size());
      for (int s : severity_set) {
        row.push_back(corrupted.at({corruption, s}).at(metric));
      }
      grid.values.push_back(std::move(row));
    }
    out[metric] = rpc(grid);
  }
  return out;
}

GridTable parse_grid_csv(std::istream & in)
{
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw std::runtime_error("grid csv line 1: empty file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "corruption" || header[1] != "severity") {
    throw std::runtime_error(
      "grid csv line 1: header must be 'corruption,severity,<metric>,...'");
  }

  GridTable table;
  table.metric_names.assign(header.begin() + 2, header.end());
  bool clean_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error(
        "grid csv line " + std::to_string(line_no) + ": expected " +
        std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    MetricSet metrics;
    for (std::size_t m = 0; m < table.metric_names.size(); ++m) {
      metrics[table.metric_names[m]] = parse_real(fields[m + 2], line_no);
    }
    const long severity = parse_int(fields[1], line_no);
    if (fields[0] == "clean") {
      if (severity != 0) {
        throw std::runtime_error(
          "grid csv line " + std::to_string(line_no) + ": clean row must have severity 0");
      }
      if (clean_seen) {
        throw std::runtime_error(
          "grid csv line " + std::to_string(line_no) + ": duplicate clean row");
      }
      clean_seen = true;
      table.clean = std::move(metrics);
      continue;
    }
    const std::pair<std::string, int> key{fields[0], static_cast<int>(severity)};
    if (table.cells.count(key) != 0) {
      throw std::runtime_error(
        "grid csv line " + std::to_string(line_no) + ": duplicate cell " + fields[0] + ".s" +
        std::to_string(severity));
    }
    table.cells.emplace(key, std::move(metrics));
  }

  if (!clean_seen) {
    throw std::runtime_error("grid csv: missing required 'clean,0,...' row");
  }
  if (table.cells.empty()) {
    throw std::runtime_error("grid csv: no corruption rows");
  }
  return table;
}

void write_grid_csv(std::ostream & out, const GridTable & table)
{
  out << "corruption,severity";
  for (const std::string & name : table.metric_names) {
    out << ',' << name;
  }
  out << '\n';

  const auto write_row = [&](const std::string & corruption, int severity, const MetricSet & metrics) {
    out << corruption << ',' << severity;
    for (const std::string & name : table.metric_names) {
      out << ',' << format_real(metrics.at(name));
    }
    out << '\n';
  };

  write_row("clean", 0, table.clean);
  for (const auto & [key, metrics] : table.cells) {
    write_row(key.first, key.second, metrics);
  }
}

}  // namespace probdet
