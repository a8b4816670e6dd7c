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

#ifndef PROBDET_TESTS_ORACLES_HPP_
#define PROBDET_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "probdet/bvn.hpp"
#include "probdet/geometry.hpp"
#include "probdet/pdq.hpp"

namespace oracles
{

inline double pixel_probability(const probdet::ProbBox & det, int ix, int iy)
{
  const double cx = ix + 0.5;
  const double cy = iy + 0.5;
  const double p_tl = probdet::bvn_cdf(cx - det.tl.x, cy - det.tl.y, det.cov_tl);
  const double p_br = probdet::bvn_cdf(det.br.x - cx, det.br.y - cy, det.cov_br);
  return std::clamp(p_tl * p_br, probdet::kProbClamp, 1.0 - probdet::kProbClamp);
}

// Reference spatial quality: no support window, every pixel of the frame is
// enumerated, and the background loss uses plain log(1 - p).
inline double spatial_quality(
  const probdet::ProbBox & det, const probdet::GroundTruthObject & gt, int width, int height)
{
  double fg = 0.0;
  for (const probdet::PixelCoord & p : gt.mask) {
    fg -= std::log(oracles::pixel_probability(det, p.x, p.y));
  }
  double bg = 0.0;
  for (int iy = 0; iy < height; ++iy) {
    for (int ix = 0; ix < width; ++ix) {
      const double p = oracles::pixel_probability(det, ix, iy);
      if (p <= probdet::kProbClamp) {
        continue;
      }
      if (probdet::pixel_in_box(gt.bbox, ix, iy)) {
        continue;
      }
      bg -= std::log(1.0 - p);
    }
  }
  const double scale = 1.0 / static_cast<double>(gt.mask.size());
  return std::exp(-(fg * scale + bg * scale));
}

// Reference assignment value: tries every permutation of the padded square
// problem and keeps the best row-order sum.
inline double assignment_total(const std::vector<std::vector<double>> & score)
{
  const std::size_t rows = score.size();
  const std::size_t cols = rows == 0 ? 0 : score[0].size();
  const std::size_t n = std::max(rows, cols);
  if (n == 0) {
    return 0.0;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (perm[i] < cols) {
        total += score[i][perm[i]];
      }
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Reference nearest-PSD projection built on the rotation-angle form of the
// 2x2 symmetric eigendecomposition.
inline probdet::CovMatrix2 nearest_psd(const probdet::CovMatrix2 & m)
{
  const double theta = 0.5 * std::atan2(2.0 * m.xy, m.xx - m.yy);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double l1 = m.xx * c * c + 2.0 * m.xy * c * s + m.yy * s * s;
  const double l2 = m.xx * s * s - 2.0 * m.xy * c * s + m.yy * c * c;
  const double k1 = std::max(l1, 0.0);
  const double k2 = std::max(l2, 0.0);
  probdet::CovMatrix2 out;
  out.xx = k1 * c * c + k2 * s * s;
  out.xy = (k1 - k2) * c * s;
  out.yy = k1 * s * s + k2 * c * c;
  return out;
}

// Zero-covariance detection with a one-hot class vector, the building block
// for hand-computed PDQ fixtures.
inline probdet::ProbBox exact_det(
  double x1, double y1, double x2, double y2, int class_id, int classes, double confidence = 1.0)
{
  probdet::ProbBox det;
  det.tl = probdet::Corner{x1, y1};
  det.br = probdet::Corner{x2, y2};
  det.label_probs.assign(static_cast<std::size_t>(classes), 0.0);
  det.label_probs[static_cast<std::size_t>(class_id)] = confidence;
  return det;
}

inline probdet::GroundTruthObject box_gt(
  double x1, double y1, double x2, double y2, int class_id, int width, int height)
{
  probdet::GroundTruthObject gt;
  gt.class_id = class_id;
  gt.bbox = probdet::Box{probdet::Corner{x1, y1}, probdet::Corner{x2, y2}};
  gt.mask = probdet::box_pixels(gt.bbox, width, height);
  return gt;
}

}  // namespace oracles

#endif  // PROBDET_TESTS_ORACLES_HPP_
