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

#ifndef PROBDET_ASSIGNMENT_HPP_
#define PROBDET_ASSIGNMENT_HPP_

#include <vector>

namespace probdet
{

// Solves the rectangular assignment problem maximizing the total score.
// `score[i][j]` is the value of pairing row i with column j; all rows must
// have the same length. Returns one entry per row: the assigned column, or
// -1 if the row is left unassigned (only possible when rows > columns).
// Unassigned pairings contribute zero, so rows whose best use of a column
// would not beat leaving it free may still be assigned; callers that need
// "no pairing" semantics should treat zero-score pairs accordingly.
std::vector<int> solve_max_assignment(const std::vector<std::vector<double>> & score);

}  // namespace probdet

#endif  // PROBDET_ASSIGNMENT_HPP_
