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

#include "probdet/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace probdet
{

double confidence_of(const RawBox & b)
{
  double best = 0.0;
  for (double s : b.class_scores) {
    best = std::max(best, s);
  }
  return b.objectness * best;
}

std::vector<std::size_t> suppress(const std::vector<RawBox> & boxes, const FilterConfig & cfg)
{
  struct Candidate
  {
    std::size_t index;
    double confidence;
    Box box;
  };

  std::vector<Candidate> candidates;
  candidates.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const double conf = confidence_of(boxes[i]);
    if (conf < cfg.conf_threshold) {
      continue;
    }
    if (boxes[i].width <= 0.0 || boxes[i].height <= 0.0) {
      continue;  // degenerate box, cannot lie inside the frame
    }
    const Box corner = to_corner_form(boxes[i]);
    const bool inside = corner.tl.x >= 0.0 && corner.tl.y >= 0.0 &&
                        corner.br.x <= cfg.frame_width && corner.br.y <= cfg.frame_height;
    if (!inside) {
      continue;
    }
    candidates.push_back(Candidate{i, conf, corner});
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate & a, const Candidate & b) {
    return a.confidence > b.confidence;
  });

  std::vector<std::size_t> kept;
  std::vector<const Candidate *> kept_boxes;
  for (const Candidate & c : candidates) {
    bool suppressed = false;
    for (const Candidate * k : kept_boxes) {
      if (iou(c.box, k->box) > cfg.iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      kept.push_back(c.index);
      kept_boxes.push_back(&c);
    }
  }
  return kept;
}

RawBox pre_nms_average(const SampleSet & s)
{
  if (s.samples.empty()) {
    throw std::invalid_argument("pre_nms_average: empty sample set");
  }
  const std::size_t n = s.samples.size();
  const std::size_t classes = s.samples.front().class_scores.size();
  RawBox mean;
  mean.class_scores.assign(classes, 0.0);
  for (const RawBox & b : s.samples) {
    if (b.class_scores.size() != classes) {
      throw std::invalid_argument("pre_nms_average: inconsistent class count across samples");
    }
    mean.cx += b.cx;
    mean.cy += b.cy;
    mean.width += b.width;
    mean.height += b.height;
    mean.objectness += b.objectness;
    for (std::size_t c = 0; c < classes; ++c) {
      mean.class_scores[c] += b.class_scores[c];
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  mean.cx *= inv;
  mean.cy *= inv;
  mean.width *= inv;
  mean.height *= inv;
  mean.objectness *= inv;
  for (double & s_c : mean.class_scores) {
    s_c *= inv;
  }
  return mean;
}

CornerCovariances corner_covariances(const SampleSet & s)
{
  if (s.samples.empty()) {
    throw std::invalid_argument("corner_covariances: empty sample set");
  }
  const std::size_t n = s.samples.size();
  if (n == 1) {
    return CornerCovariances{CovMatrix2{}, CovMatrix2{}, true};
  }

  // Corners are derived directly so that degenerate samples (non-positive
  // noisy width or height) still contribute their exact coordinates.
  std::vector<Corner> tl(n);
  std::vector<Corner> br(n);
  for (std::size_t j = 0; j < n; ++j) {
    const RawBox & b = s.samples[j];
    const double hw = 0.5 * b.width;
    const double hh = 0.5 * b.height;
    tl[j] = Corner{b.cx - hw, b.cy - hh};
    br[j] = Corner{b.cx + hw, b.cy + hh};
  }

  const auto sample_cov = [n](const std::vector<Corner> & pts) {
    Corner mean;
    for (const Corner & p : pts) {
      mean.x += p.x;
      mean.y += p.y;
    }
    mean.x /= static_cast<double>(n);
    mean.y /= static_cast<double>(n);
    CovMatrix2 cov;
    for (const Corner & p : pts) {
      const double dx = p.x - mean.x;
      const double dy = p.y - mean.y;
      cov.xx += dx * dx;
      cov.xy += dx * dy;
      cov.yy += dy * dy;
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    cov.xx *= inv;
    cov.xy *= inv;
    cov.yy *= inv;
    return cov;
  };

  return CornerCovariances{sample_cov(tl), sample_cov(br), false};
}

CovMatrix2 psd_repair(const CovMatrix2 & m)
{
  // Closed-form eigendecomposition of [[xx, xy], [xy, yy]].
  const double mean = 0.5 * (m.xx + m.yy);
  const double diff = 0.5 * (m.xx - m.yy);
  const double radius = std::sqrt(diff * diff + m.xy * m.xy);
  const double lo = mean - radius;
  const double hi = mean + radius;

  if (lo >= 0.0) {
    return m;
  }
  if (hi <= 0.0) {
    return CovMatrix2{};
  }

  // Rebuild from the non-negative eigenvalue only: hi * v v^T with v the
  // unit eigenvector for hi. Pick the larger of the two analytic eigenvector
  // expressions for stability.
  double vx;
  double vy;
  if (std::abs(hi - m.xx) > std::abs(hi - m.yy)) {
    vx = m.xy;
    vy = hi - m.xx;
  } else {
    vx = hi - m.yy;
    vy = m.xy;
  }
  const double norm2 = vx * vx + vy * vy;
  if (norm2 == 0.0) {
    // xy == 0 and one negative diagonal entry: clamp it directly.
    return CovMatrix2{std::max(m.xx, 0.0), 0.0, std::max(m.yy, 0.0)};
  }
  const double scale = hi / norm2;
  return CovMatrix2{scale * vx * vx, scale * vx * vy, scale * vy * vy};
}

ProbBox to_prob_box(const RawBox & mean, const CovMatrix2 & cov_tl, const CovMatrix2 & cov_br)
{
  const Box corners = to_corner_form(mean);
  ProbBox out;
  out.tl = corners.tl;
  out.br = corners.br;
  out.cov_tl = cov_tl;
  out.cov_br = cov_br;
  out.label_probs.resize(mean.class_scores.size());
  for (std::size_t c = 0; c < mean.class_scores.size(); ++c) {
    out.label_probs[c] = mean.class_scores[c] * mean.objectness;
  }
  return out;
}

std::vector<ProbBox> fuse_frame(
  const std::vector<SampleSet> & sample_sets, const FilterConfig & cfg)
{
  std::vector<RawBox> averaged;
  averaged.reserve(sample_sets.size());
  for (const SampleSet & s : sample_sets) {
    averaged.push_back(pre_nms_average(s));
  }

  const std::vector<std::size_t> kept = suppress(averaged, cfg);

  std::vector<ProbBox> fused;
  fused.reserve(kept.size());
  for (std::size_t idx : kept) {
    const CornerCovariances covs = corner_covariances(sample_sets[idx]);
    fused.push_back(to_prob_box(averaged[idx], psd_repair(covs.tl), psd_repair(covs.br)));
  }
  return fused;
}

}  // namespace probdet
