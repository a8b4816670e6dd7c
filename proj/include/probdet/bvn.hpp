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

#ifndef PROBDET_BVN_HPP_
#define PROBDET_BVN_HPP_

#include "probdet/geometry.hpp"

namespace probdet
{

// Standard normal CDF, accurate over the full double range.
double norm_cdf(double z);

// P(X <= x, Y <= y) for a zero-mean bivariate normal with covariance `cov`.
// Degenerate covariances (zero variance on one or both axes, |rho| -> 1)
// reduce to the exact lower-dimensional limits. The result is clamped to
// [0, 1].
double bvn_cdf(double x, double y, const CovMatrix2 & cov);

// P(X <= x, Y <= y) for standard normal marginals with correlation rho.
double bvn_cdf_standard(double x, double y, double rho);

}  // namespace probdet

#endif  // PROBDET_BVN_HPP_
