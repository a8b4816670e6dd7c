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

#ifndef PROBDET_SYNTH_HPP_
#define PROBDET_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "probdet/fusion.hpp"
#include "probdet/geometry.hpp"

namespace probdet
{

// Parameters of the synthetic scene generator. Every output is a pure
// function of this struct, so equal specs give bit-identical scenes.
struct SceneSpec
{
  std::uint64_t seed = 1;
  int frame_width = 64;
  int frame_height = 64;
  std::size_t frames = 100;
  std::size_t min_objects = 1;
  std::size_t max_objects = 3;
  int classes = 5;

  double sigma = 0.0;        // corner noise std dev, pixels
  double sigma_step = 0.5;   // per-severity-level increase used by the ladder
  double confidence_noise = 0.0;
  double fp_rate = 0.0;      // expected false positives per frame
  double fn_rate = 0.0;      // probability a ground truth gets no detection
  double weak_rate = 0.0;    // probability a detected ground truth is weak

  double weak_conf_lo = 0.25;  // confidence range of weak detections
  double weak_conf_hi = 0.45;
  double fp_conf_lo = 0.10;    // confidence range of injected false positives
  double fp_conf_hi = 0.30;

  std::size_t samples = 1;   // Monte-Carlo samples per detection
  int min_box = 8;
  int max_box = 20;
  int margin = 2;            // minimum distance of boxes from frame edges
};

// Raw detector output for one frame: one sample set per detection slot.
struct FrameSamples
{
  std::string frame_id;
  std::vector<SampleSet> detections;
};

struct SyntheticScene
{
  std::vector<Frame> ground_truth;  // detections left empty
  std::vector<FrameSamples> dump;
};

// Scene with shared ground truth and one dump per severity level. dumps[0]
// is the clean level (sigma = spec.sigma); dumps[k] uses
// sigma = spec.sigma + k * spec.sigma_step. All levels share object
// placement and the underlying unit noise draws, so a level differs from
// the next only through the noise scale.
struct SeverityLadder
{
  std::vector<Frame> ground_truth;
  std::vector<std::vector<FrameSamples>> dumps;
  std::vector<double> sigmas;
};

// Generates non-overlapping ground-truth boxes (integer corners, box-shaped
// masks) and a detection dump with Gaussian corner noise, weak detections,
// and injected false positives per the spec rates. Throws
// std::invalid_argument on an invalid spec and std::runtime_error when
// object placement fails after bounded retries.
SyntheticScene generate(const SceneSpec & spec);

// generate() across `levels` extra severity levels; see SeverityLadder.
SeverityLadder severity_ladder(const SceneSpec & spec, std::size_t levels);

}  // namespace probdet

#endif  // PROBDET_SYNTH_HPP_
