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

#include "probdet/pdq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "probdet/assignment.hpp"
#include "probdet/bvn.hpp"
#include "probdet/map_eval.hpp"
#include "probdet/threading.hpp"

namespace probdet
{
namespace
{

// Clamped per-pixel probabilities over the window that bounds a detection's
// background support, cached so each pixel is evaluated once per detection
// instead of once per ground-truth pair.
struct DetectionField
{
  int x0 = 0;
  int x1 = 0;
  int y0 = 0;
  int y1 = 0;
  std::vector<double> probs;  // row-major over [x0,x1) x [y0,y1)

  double at(int ix, int iy) const
  {
    return probs[static_cast<std::size_t>(iy - y0) * static_cast<std::size_t>(x1 - x0) +
                 static_cast<std::size_t>(ix - x0)];
  }
};

double sigma_of(double variance)
{
  return variance > 0.0 ? std::sqrt(variance) : 0.0;
}

DetectionField build_field(const ProbBox & det, int frame_width, int frame_height)
{
  const double lo_x = det.tl.x - kSupportSigmas * sigma_of(det.cov_tl.xx);
  const double hi_x = det.br.x + kSupportSigmas * sigma_of(det.cov_br.xx);
  const double lo_y = det.tl.y - kSupportSigmas * sigma_of(det.cov_tl.yy);
  const double hi_y = det.br.y + kSupportSigmas * sigma_of(det.cov_br.yy);

  DetectionField field;
  const double w = static_cast<double>(frame_width);
  const double h = static_cast<double>(frame_height);
  // One extra pixel on each side guards the window rounding; membership in
  // the support itself is decided by the probability filter, not the window.
  field.x0 = static_cast<int>(std::clamp(std::floor(lo_x) - 1.0, 0.0, w));
  field.x1 = static_cast<int>(std::clamp(std::ceil(hi_x) + 2.0, 0.0, w));
  field.y0 = static_cast<int>(std::clamp(std::floor(lo_y) - 1.0, 0.0, h));
  field.y1 = static_cast<int>(std::clamp(std::ceil(hi_y) + 2.0, 0.0, h));
  if (field.x1 < field.x0) {
    field.x1 = field.x0;
  }
  if (field.y1 < field.y0) {
    field.y1 = field.y0;
  }

  field.probs.resize(
    static_cast<std::size_t>(field.x1 - field.x0) * static_cast<std::size_t>(field.y1 - field.y0));
  std::size_t idx = 0;
  for (int iy = field.y0; iy < field.y1; ++iy) {
    for (int ix = field.x0; ix < field.x1; ++ix) {
      field.probs[idx++] = pixel_probability(det, ix, iy);
    }
  }
  return field;
}

PairQuality spatial_quality_with_field(
  const ProbBox & det, const DetectionField & field, const GroundTruthObject & gt)
{
  if (gt.mask.empty()) {
    throw std::invalid_argument("spatial_quality: empty ground-truth mask");
  }

  double fg_sum = 0.0;
  for (const PixelCoord & p : gt.mask) {
    fg_sum -= std::log(pixel_probability(det, p.x, p.y));
  }

  double bg_sum = 0.0;
  for (int iy = field.y0; iy < field.y1; ++iy) {
    for (int ix = field.x0; ix < field.x1; ++ix) {
      const double p = field.at(ix, iy);
      if (p <= kProbClamp) {
        continue;  // outside the detection's support
      }
      if (pixel_in_box(gt.bbox, ix, iy)) {
        continue;
      }
      bg_sum -= std::log1p(-p);
    }
  }

  const double inv_mask = 1.0 / static_cast<double>(gt.mask.size());
  PairQuality q;
  q.fg_loss = fg_sum * inv_mask;
  q.bg_loss = bg_sum * inv_mask;
  q.spatial_q = std::exp(-(q.fg_loss + q.bg_loss));
  return q;
}

}  // namespace

double label_quality(const ProbBox & det, int gt_class)
{
  if (gt_class < 0 || static_cast<std::size_t>(gt_class) >= det.label_probs.size()) {
    throw std::out_of_range("label_quality: class id outside the label vector");
  }
  return det.label_probs[static_cast<std::size_t>(gt_class)];
}

double pixel_probability(const ProbBox & det, int ix, int iy)
{
  const double cx = static_cast<double>(ix) + 0.5;
  const double cy = static_cast<double>(iy) + 0.5;
  const double p_tl = bvn_cdf(cx - det.tl.x, cy - det.tl.y, det.cov_tl);
  const double p_br = bvn_cdf(det.br.x - cx, det.br.y - cy, det.cov_br);
  return std::clamp(p_tl * p_br, kProbClamp, 1.0 - kProbClamp);
}

PairQuality spatial_quality(
  const ProbBox & det, const GroundTruthObject & gt, int frame_width, int frame_height)
{
  const DetectionField field = build_field(det, frame_width, frame_height);
  return spatial_quality_with_field(det, field, gt);
}

double ppdq(double label_q, double spatial_q)
{
  return std::sqrt(label_q * spatial_q);
}

PairQuality pair_quality(
  const ProbBox & det, const GroundTruthObject & gt, int frame_width, int frame_height)
{
  PairQuality q = spatial_quality(det, gt, frame_width, frame_height);
  q.label_q = label_quality(det, gt.class_id);
  q.ppdq = ppdq(q.label_q, q.spatial_q);
  return q;
}

FrameTally assign_frame(const Frame & frame)
{
  const std::size_t num_gt = frame.ground_truths.size();
  const std::size_t num_det = frame.detections.size();

  FrameTally tally;
  if (num_gt == 0 || num_det == 0) {
    tally.fn = num_gt;
    tally.fp = num_det;
    return tally;
  }

  std::vector<DetectionField> fields;
  fields.reserve(num_det);
  for (const ProbBox & det : frame.detections) {
    fields.push_back(build_field(det, frame.width, frame.height));
  }

  std::vector<std::vector<PairQuality>> quality(num_gt, std::vector<PairQuality>(num_det));
  std::vector<std::vector<double>> score(num_gt, std::vector<double>(num_det));
  for (std::size_t g = 0; g < num_gt; ++g) {
    const GroundTruthObject & gt = frame.ground_truths[g];
    for (std::size_t d = 0; d < num_det; ++d) {
      PairQuality q = spatial_quality_with_field(frame.detections[d], fields[d], gt);
      q.label_q = label_quality(frame.detections[d], gt.class_id);
      q.ppdq = ppdq(q.label_q, q.spatial_q);
      quality[g][d] = q;
      score[g][d] = q.ppdq;
    }
  }

  const std::vector<int> match = solve_max_assignment(score);
  for (std::size_t g = 0; g < num_gt; ++g) {
    const int d = match[g];
    if (d < 0 || score[g][static_cast<std::size_t>(d)] <= 0.0) {
      continue;  // zero-quality assignments do not count as matches
    }
    const PairQuality & q = quality[g][static_cast<std::size_t>(d)];
    ++tally.tp;
    tally.ppdq_values.push_back(q.ppdq);
    tally.label_values.push_back(q.label_q);
    tally.spatial_values.push_back(q.spatial_q);
  }
  tally.fn = num_gt - tally.tp;
  tally.fp = num_det - tally.tp;
  return tally;
}

EvalReport pdq_score(const std::vector<FrameTally> & tallies)
{
  EvalReport report;
  report.frame_tallies = tallies;

  double q_sum = 0.0;
  double label_sum = 0.0;
  double spatial_sum = 0.0;
  for (const FrameTally & t : tallies) {
    report.total_tp += t.tp;
    report.total_fp += t.fp;
    report.total_fn += t.fn;
    for (double v : t.ppdq_values) {
      q_sum += v;
    }
    for (double v : t.label_values) {
      label_sum += v;
    }
    for (double v : t.spatial_values) {
      spatial_sum += v;
    }
  }

  const std::size_t denom = report.total_tp + report.total_fp + report.total_fn;
  report.pdq = denom == 0 ? 0.0 : q_sum / static_cast<double>(denom);
  const double tp = static_cast<double>(report.total_tp);
  report.avg_label_q = report.total_tp == 0 ? 0.0 : label_sum / tp;
  report.avg_spatial_q = report.total_tp == 0 ? 0.0 : spatial_sum / tp;
  return report;
}

EvaluationResult evaluate_dataset(const std::vector<Frame> & frames, const EvaluationOptions & options)
{
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return frames[a].frame_id < frames[b].frame_id;
  });

  std::vector<FrameTally> tallies(frames.size());
  parallel_for(frames.size(), options.threads, [&](std::size_t i) {
    tallies[i] = assign_frame(frames[order[i]]);
  });

  EvaluationResult result;
  result.report = pdq_score(tallies);
  result.map_iou = options.map_iou;
  result.frame_ids.reserve(frames.size());
  std::vector<const Frame *> sorted_view;
  sorted_view.reserve(frames.size());
  for (std::size_t i : order) {
    result.frame_ids.push_back(frames[i].frame_id);
    sorted_view.push_back(&frames[i]);
  }
  result.map = mean_ap(sorted_view, options.map_iou);
  return result;
}

}  // namespace probdet
