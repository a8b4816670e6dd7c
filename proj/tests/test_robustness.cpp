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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "probdet/robustness.hpp"

using namespace probdet;

TEST_CASE("rpc hand fixture gives one half")
{
  PerformanceGrid grid;
  grid.metric_name = "pdq";
  grid.clean = 0.8;
  grid.values = {{0.6, 0.2}, {0.4, 0.4}};
  CHECK(std::abs(rpc(grid) - 0.5) < 1e-9);
}

TEST_CASE("rpc is the nested mean over corruptions then severities")
{
  PerformanceGrid grid;
  grid.metric_name = "m";
  grid.clean = 1.0;
  // Corruption means are 0.2 and 0.6; a flat mean over cells would give
  // (0.1 + 0.3 + 0.6) / 3 instead.
  grid.values = {{0.1, 0.3}, {0.6, 0.6}};
  CHECK(rpc(grid) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("rpc equals the flat mean when severity counts match")
{
  PerformanceGrid grid;
  grid.metric_name = "m";
  grid.clean = 0.9;
  grid.values = {{0.5, 0.7}, {0.3, 0.1}};
  const double flat = (0.5 + 0.7 + 0.3 + 0.1) / 4.0 / 0.9;
  CHECK(rpc(grid) == doctest::Approx(flat).epsilon(1e-12));
}

TEST_CASE("rpc is invariant under common scaling")
{
  PerformanceGrid grid;
  grid.metric_name = "m";
  grid.clean = 0.6;
  grid.values = {{0.42, 0.3}, {0.18, 0.24}};
  const double base = rpc(grid);

  grid.clean *= 7.5;
  for (auto & row : grid.values) {
    for (double & v : row) {
      v *= 7.5;
    }
  }
  CHECK(rpc(grid) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rpc rejects bad grids")
{
  PerformanceGrid grid;
  grid.metric_name = "m";
  grid.clean = 0.0;
  grid.values = {{0.1}};
  CHECK_THROWS_AS(rpc(grid), std::invalid_argument);

  grid.clean = -0.2;
  CHECK_THROWS_AS(rpc(grid), std::invalid_argument);

  grid.clean = 0.5;
  grid.values.clear();
  CHECK_THROWS_AS(rpc(grid), std::invalid_argument);

  grid.values = {{0.1, 0.2}, {0.3}};
  CHECK_THROWS_AS(rpc(grid), std::invalid_argument);
}

TEST_CASE("rpc_suite computes one score per metric")
{
  MetricSet clean = {{"pdq", 0.8}, {"map", 0.9}};
  std::map<std::pair<std::string, int>, MetricSet> cells;
  cells[{"noise", 1}] = {{"pdq", 0.6}, {"map", 0.8}};
  cells[{"noise", 2}] = {{"pdq", 0.2}, {"map", 0.4}};
  cells[{"blur", 1}] = {{"pdq", 0.4}, {"map", 0.5}};
  cells[{"blur", 2}] = {{"pdq", 0.4}, {"map", 0.5}};

  const auto result = rpc_suite(cells, clean);
  REQUIRE(result.count("pdq") == 1);
  REQUIRE(result.count("map") == 1);
  REQUIRE(result.at("pdq").has_value());
  REQUIRE(result.at("map").has_value());
  CHECK(std::abs(*result.at("pdq") - 0.5) < 1e-9);
  CHECK(*result.at("map") == doctest::Approx((0.6 + 0.5) / 2.0 / 0.9).epsilon(1e-12));
}

TEST_CASE("rpc_suite isolates a zero clean metric instead of failing the rest")
{
  MetricSet clean = {{"good", 0.8}, {"flat", 0.0}};
  std::map<std::pair<std::string, int>, MetricSet> cells;
  cells[{"noise", 1}] = {{"good", 0.4}, {"flat", 0.1}};

  const auto result = rpc_suite(cells, clean);
  CHECK(result.at("good").has_value());
  CHECK_FALSE(result.at("flat").has_value());
}

TEST_CASE("rpc_suite rejects inconsistent metric sets and missing severities")
{
  MetricSet clean = {{"pdq", 0.8}};
  std::map<std::pair<std::string, int>, MetricSet> cells;
  cells[{"noise", 1}] = {{"map", 0.4}};
  CHECK_THROWS_AS(rpc_suite(cells, clean), std::invalid_argument);

  cells.clear();
  cells[{"noise", 1}] = {{"pdq", 0.4}};
  cells[{"noise", 3}] = {{"pdq", 0.2}};
  cells[{"blur", 1}] = {{"pdq", 0.5}};
  try {
    rpc_suite(cells, clean);
    FAIL("expected an exception for the missing blur severity");
  } catch (const std::invalid_argument & e) {
    const std::string msg = e.what();
    CHECK(msg.find("blur.s3") != std::string::npos);
  }
}

TEST_CASE("grid csv round trip preserves every value")
{
  GridTable table;
  table.metric_names = {"map", "pdq"};
  table.clean = {{"map", 0.9123456789012345}, {"pdq", 1.0 / 3.0}};
  table.cells[{"blur", 1}] = {{"map", 0.5}, {"pdq", 0.25}};
  table.cells[{"noise", 1}] = {{"map", 1e-14}, {"pdq", 0.125}};
  table.cells[{"noise", 2}] = {{"map", 0.75}, {"pdq", 0.0625}};

  std::ostringstream out;
  write_grid_csv(out, table);
  std::istringstream in(out.str());
  const GridTable back = parse_grid_csv(in);

  CHECK(back.metric_names == table.metric_names);
  CHECK(back.clean == table.clean);
  CHECK(back.cells == table.cells);

  std::ostringstream again;
  write_grid_csv(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("grid csv parser rejects malformed input")
{
  const auto parse = [](const std::string & text) {
    std::istringstream in(text);
    return parse_grid_csv(in);
  };

  CHECK_THROWS(parse(""));
  CHECK_THROWS(parse("bogus,severity,pdq\nclean,0,0.5\n"));
  CHECK_THROWS(parse("corruption,severity,pdq\nclean,1,0.5\n"));
  CHECK_THROWS(parse("corruption,severity,pdq\nnoise,1,0.5\n"));
  CHECK_THROWS(parse("corruption,severity,pdq\nclean,0,0.5\nnoise,1,abc\n"));
  CHECK_THROWS(parse("corruption,severity,pdq\nclean,0,0.5\nnoise,1,0.4\nnoise,1,0.3\n"));
  CHECK_THROWS(parse("corruption,severity,pdq\nclean,0,0.5\nnoise,1,0.4,0.6\n"));
  CHECK_THROWS(parse("corruption,severity,pdq\nclean,0,0.5\n"));

  try {
    parse("corruption,severity,pdq\nclean,0,0.5\nnoise,one,0.4\n");
    FAIL("expected a parse error with a line number");
  } catch (const std::runtime_error & e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
