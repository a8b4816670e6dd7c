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

#ifndef PROBDET_PDQ_HPP_
#define PROBDET_PDQ_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "probdet/geometry.hpp"

namespace probdet
{

// Per-pixel probabilities are clamped to [kProbClamp, 1 - kProbClamp] before
// entering the log losses, so no single pixel can drive a loss to infinity.
inline constexpr double kProbClamp = 1e-14;

// Half-width, in per-axis standard deviations beyond the mean box, of the
// window that bounds a detection's background support. Outside this window
// every per-pixel probability is provably below kProbClamp (the one-sided
// normal tail at 8 sigma is ~6.2e-16), so the window never excludes a pixel
// that the support definition (probability > kProbClamp) would include.
inline constexpr double kSupportSigmas = 8.0;

// Quality terms for one detection / ground-truth pair.
struct PairQuality
{
  double label_q = 0.0;
  double spatial_q = 0.0;
  double ppdq = 0.0;
  double fg_loss = 0.0;
  double bg_loss = 0.0;
};

// Assignment outcome for one frame. The per-pair vectors hold one entry per
// true positive, ordered by ground-truth index.
struct FrameTally
{
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<double> ppdq_values;
  std::vector<double> label_values;
  std::vector<double> spatial_values;
};

// Dataset-level score. avg_label_q and avg_spatial_q average over true
// positives only (0 when there are none).
struct EvalReport
{
  double pdq = 0.0;
  double avg_label_q = 0.0;
  double avg_spatial_q = 0.0;
  std::size_t total_tp = 0;
  std::size_t total_fp = 0;
  std::size_t total_fn = 0;
  std::vector<FrameTally> frame_tallies;
};

// Probability mass the detection assigns to the ground-truth class,
// regardless of whether that class is the argmax. Throws std::out_of_range
// when gt_class is outside [0, C).
double label_quality(const ProbBox & det, int gt_class);

// P(pixel in box): product of the two corner CDFs evaluated at the pixel
// center's offsets from each corner, clamped to [kProbClamp, 1-kProbClamp].
double pixel_probability(const ProbBox & det, int ix, int iy);

// Foreground/background spatial losses and spatial quality for one pair.
// Only the spatial fields of the result are populated (label_q and ppdq are
// left 0). Throws std::invalid_argument on an empty ground-truth mask.
PairQuality spatial_quality(
  const ProbBox & det, const GroundTruthObject & gt, int frame_width, int frame_height);

// Geometric mean of the label and spatial qualities.
double ppdq(double label_q, double spatial_q);

// All quality terms for one pair.
PairQuality pair_quality(
  const ProbBox & det, const GroundTruthObject & gt, int frame_width, int frame_height);

// Optimal one-to-one assignment of detections to ground truths maximizing
// total pairwise quality. Assigned pairs with positive quality are TPs;
// everything else counts as FN (ground truths) or FP (detections).
FrameTally assign_frame(const Frame & frame);

// Aggregates frame tallies into the dataset score: sum of recorded pair
// qualities over TP+FN+FP (0 when that count is 0).
EvalReport pdq_score(const std::vector<FrameTally> & tallies);

struct EvaluationOptions
{
  double map_iou = 0.5;
  unsigned threads = 0;  // 0 selects available hardware parallelism
};

// Full evaluation over a dataset: per-frame assignment (run concurrently,
// reduced in frame_id order for bit-stable sums) plus mean average
// precision at the configured IoU threshold.
struct EvaluationResult
{
  EvalReport report;
  double map = 0.0;
  double map_iou = 0.5;
  std::vector<std::string> frame_ids;  // evaluation order (sorted by id)
};

EvaluationResult evaluate_dataset(
  const std::vector<Frame> & frames, const EvaluationOptions & options = {});

}  // namespace probdet

#endif  // PROBDET_PDQ_HPP_
