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

#include <set>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "probdet/assignment.hpp"
#include "probdet/rng.hpp"

using namespace probdet;

namespace
{

double assigned_total(const std::vector<std::vector<double>> & score, const std::vector<int> & a)
{
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= 0) {
      total += score[i][static_cast<std::size_t>(a[i])];
    }
  }
  return total;
}

void check_valid(const std::vector<std::vector<double>> & score, const std::vector<int> & a)
{
  REQUIRE(a.size() == score.size());
  std::set<int> used;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= 0) {
      CHECK(static_cast<std::size_t>(a[i]) < score[i].size());
      CHECK(used.insert(a[i]).second);
    }
  }
}

}  // namespace

TEST_CASE("two-by-two fixture prefers the swapped pairing")
{
  const std::vector<std::vector<double>> score = {{0.9, 0.8}, {0.7, 0.1}};
  const std::vector<int> a = solve_max_assignment(score);
  REQUIRE(a.size() == 2);
  CHECK(a[0] == 1);
  CHECK(a[1] == 0);
  CHECK(assigned_total(score, a) == doctest::Approx(1.5));
}

TEST_CASE("rectangular problems leave the surplus side unassigned")
{
  const std::vector<std::vector<double>> wide = {{1.0, 5.0, 2.0}};
  const std::vector<int> a = solve_max_assignment(wide);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == 1);

  const std::vector<std::vector<double>> tall = {{1.0}, {5.0}, {2.0}};
  const std::vector<int> b = solve_max_assignment(tall);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == -1);
  CHECK(b[1] == 0);
  CHECK(b[2] == -1);
}

TEST_CASE("empty and degenerate problems")
{
  CHECK(solve_max_assignment({}).empty());

  const std::vector<std::vector<double>> zeros = {{0.0, 0.0}, {0.0, 0.0}};
  const std::vector<int> a = solve_max_assignment(zeros);
  check_valid(zeros, a);
  CHECK(assigned_total(zeros, a) == 0.0);
}

TEST_CASE("ragged input is rejected")
{
  const std::vector<std::vector<double>> ragged = {{1.0, 2.0}, {3.0}};
  CHECK_THROWS_AS(solve_max_assignment(ragged), std::invalid_argument);
}

TEST_CASE("negative entries are handled")
{
  const std::vector<std::vector<double>> score = {{-5.0, -1.0}, {-2.0, -8.0}};
  const std::vector<int> a = solve_max_assignment(score);
  check_valid(score, a);
  CHECK(assigned_total(score, a) == oracles::assignment_total(score));
}

TEST_CASE("random six-by-six problems match exhaustive search exactly")
{
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> score(6, std::vector<double>(6));
    for (auto & row : score) {
      for (double & v : row) {
        v = rng.uniform(0.0, 1.0);
      }
    }
    const std::vector<int> a = solve_max_assignment(score);
    check_valid(score, a);
    CHECK(assigned_total(score, a) == oracles::assignment_total(score));
  }
}

TEST_CASE("random rectangular problems match exhaustive search exactly")
{
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const std::size_t cols = static_cast<std::size_t>(rng.uniform_int(1, 5));
    std::vector<std::vector<double>> score(rows, std::vector<double>(cols));
    for (auto & row : score) {
      for (double & v : row) {
        v = rng.uniform(-1.0, 1.0);
      }
    }
    const std::vector<int> a = solve_max_assignment(score);
    check_valid(score, a);
    CHECK(assigned_total(score, a) == oracles::assignment_total(score));
  }
}
