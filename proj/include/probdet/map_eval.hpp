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

#ifndef PROBDET_MAP_EVAL_HPP_
#define PROBDET_MAP_EVAL_HPP_

#include <cstddef>
#include <vector>

#include "probdet/geometry.hpp"

namespace probdet
{

// Point detection consumed by the average-precision evaluator.
struct Detection2D
{
  Box box;
  int class_id = 0;
  double confidence = 0.0;
};

// Single-class detection tagged with the frame it belongs to.
struct ApDetection
{
  std::size_t frame = 0;
  Box box;
  double confidence = 0.0;
};

// Single-class ground-truth box tagged with its frame.
struct ApGroundTruth
{
  std::size_t frame = 0;
  Box box;
};

// Collapses a probabilistic box to a point detection: the class is the
// argmax of label_probs (lowest index on ties) and the confidence is the
// maximum label probability.
Detection2D to_detection(const ProbBox & det);

// Single-class average precision with 101-point interpolation. Detections
// are sorted by descending confidence (stable, so equal confidences keep
// input order) and greedily matched to the unmatched ground truth of the
// same frame with the highest IoU >= iou_thr, ties broken by the lower
// ground-truth index. Returns 0 when there are no ground truths.
double average_precision(
  std::vector<ApDetection> dets, const std::vector<ApGroundTruth> & gts, double iou_thr);

// Mean AP over the classes that have at least one ground truth, computed
// from full frames (detections as point detections). Returns 0 when no
// class has a ground truth.
double mean_ap(const std::vector<Frame> & frames, double iou_thr);

// Same, over a borrowed view (lets callers reorder frames without copying).
double mean_ap(const std::vector<const Frame *> & frames, double iou_thr);

}  // namespace probdet

#endif  // PROBDET_MAP_EVAL_HPP_
