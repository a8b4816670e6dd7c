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

#include "probdet/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace probdet
{

std::vector<int> solve_max_assignment(const std::vector<std::vector<double>> & score)
{
  const std::size_t rows = score.size();
  if (rows == 0) {
    return {};
  }
  const std::size_t cols = score.front().size();
  for (const auto & row : score) {
    if (row.size() != cols) {
      throw std::invalid_argument("solve_max_assignment: ragged score matrix");
    }
  }
  const std::size_t n = std::max(rows, cols);

  // Pad to square and minimize the negated score; padding cells cost zero,
  // matching the convention that an unassigned pairing contributes nothing.
  const auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? -score[i][j] : 0.0;
  };

  // Shortest augmenting path with dual potentials, O(n^3). Index 0 on both
  // sides is a virtual slot; p[j] holds the 1-based row matched to column j.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  std::vector<double> minv(n + 1, 0.0);
  std::vector<char> used(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j];
    if (i >= 1 && i <= rows && j <= cols) {
      assignment[i - 1] = static_cast<int>(j - 1);
    }
  }
  return assignment;
}

}  // namespace probdet
