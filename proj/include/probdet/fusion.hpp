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

#ifndef PROBDET_FUSION_HPP_
#define PROBDET_FUSION_HPP_

#include <cstddef>
#include <vector>

#include "probdet/geometry.hpp"

namespace probdet
{

/// The N dropout-sample boxes describing one underlying detection slot.
struct SampleSet
{
  std::vector<RawBox> samples;
};

struct FilterConfig
{
  double conf_threshold = 0.5;
  double iou_threshold = 0.6;
  int frame_width = 0;
  int frame_height = 0;
};

/// Scalar confidence compared against the threshold:
/// objectness times the highest class score.
double confidence_of(const RawBox & b);

/// Applies the three suppression rules in order: (1) confidence below the
/// threshold, (2) any corner outside [0, frame_width] x [0, frame_height],
/// (3) greedy NMS dropping boxes with IoU above iou_threshold against an
/// already-kept higher-confidence box. Returns the surviving input indices
/// in descending-confidence order (ties broken by lower index).
std::vector<std::size_t> suppress(const std::vector<RawBox> & boxes, const FilterConfig & cfg);

/// Componentwise arithmetic mean over the sample set.
/// Throws std::invalid_argument on an empty set.
RawBox pre_nms_average(const SampleSet & s);

struct CornerCovariances
{
  CovMatrix2 tl;
  CovMatrix2 br;
  /// True when only one sample was available, i.e. the zero covariances mean
  /// "no spread observed", not "perfectly certain".
  bool deterministic = false;
};

/// Unbiased (N-1) sample covariance of the top-left and bottom-right corners
/// across the set, before PSD repair. A single sample yields zero matrices
/// with the deterministic flag set. Throws std::invalid_argument on an empty
/// set.
CornerCovariances corner_covariances(const SampleSet & s);

/// Eigendecomposes the matrix and rebuilds it with negative eigenvalues
/// clamped to zero. Already-PSD input is returned unchanged.
CovMatrix2 psd_repair(const CovMatrix2 & m);

/// Corner-form box plus label probabilities scaled by objectness; the given
/// covariances are attached as-is (repair them first).
ProbBox to_prob_box(const RawBox & mean, const CovMatrix2 & cov_tl, const CovMatrix2 & cov_br);

/// Full stochastic-path fusion for one frame: averages every sample set,
/// suppresses on the averaged boxes, and converts each survivor using the
/// covariances of its own sample set. Output order follows the suppression
/// order (descending confidence).
std::vector<ProbBox> fuse_frame(
  const std::vector<SampleSet> & sample_sets, const FilterConfig & cfg);

}  // namespace probdet

#endif  // PROBDET_FUSION_HPP_
