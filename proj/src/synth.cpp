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

#include "probdet/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "probdet/rng.hpp"

namespace probdet
{
namespace
{

constexpr int kPlacementRetries = 1000;

struct PlannedDetection
{
  int class_id = 0;
  double objectness = 1.0;
  std::array<double, 4> corners{};                // x1 y1 x2 y2
  std::vector<std::array<double, 4>> unit_noise;  // one entry per sample
};

struct FramePlan
{
  Frame gt;
  std::vector<PlannedDetection> dets;
};

void validate(const SceneSpec & spec)
{
  const auto fail = [](const char * msg) { throw std::invalid_argument(std::string("SceneSpec: ") + msg); };
  if (spec.frame_width < 1 || spec.frame_height < 1) {
    fail("frame size must be positive");
  }
  if (spec.min_objects > spec.max_objects) {
    fail("min_objects exceeds max_objects");
  }
  if (spec.classes < 1) {
    fail("classes must be at least 1");
  }
  if (spec.sigma < 0.0 || spec.sigma_step < 0.0) {
    fail("sigma and sigma_step must be non-negative");
  }
  if (spec.confidence_noise < 0.0) {
    fail("confidence_noise must be non-negative");
  }
  if (spec.fp_rate < 0.0) {
    fail("fp_rate must be non-negative");
  }
  if (spec.fn_rate < 0.0 || spec.fn_rate > 1.0) {
    fail("fn_rate must be in [0, 1]");
  }
  if (spec.weak_rate < 0.0 || spec.weak_rate > 1.0) {
    fail("weak_rate must be in [0, 1]");
  }
  if (spec.weak_conf_lo < 0.0 || spec.weak_conf_hi > 1.0 || spec.weak_conf_lo > spec.weak_conf_hi) {
    fail("weak confidence range must satisfy 0 <= lo <= hi <= 1");
  }
  if (spec.fp_conf_lo < 0.0 || spec.fp_conf_hi > 1.0 || spec.fp_conf_lo > spec.fp_conf_hi) {
    fail("false-positive confidence range must satisfy 0 <= lo <= hi <= 1");
  }
  if (spec.samples < 1) {
    fail("samples must be at least 1");
  }
  if (spec.min_box < 1 || spec.max_box < spec.min_box) {
    fail("box size range must satisfy 1 <= min_box <= max_box");
  }
  if (spec.margin < 0) {
    fail("margin must be non-negative");
  }
  if (2 * spec.margin + spec.min_box > std::min(spec.frame_width, spec.frame_height)) {
    fail("frame too small for the requested margin and minimum box size");
  }
}

std::vector<std::array<double, 4>> draw_unit_noise(Rng & rng, std::size_t samples)
{
  std::vector<std::array<double, 4>> noise(samples);
  for (std::array<double, 4> & s : noise) {
    for (double & v : s) {
      v = rng.normal();
    }
  }
  return noise;
}

double noisy_objectness(const SceneSpec & spec, double base, Rng & rng)
{
  if (spec.confidence_noise <= 0.0) {
    return base;
  }
  const double jitter = spec.confidence_noise * std::abs(rng.normal());
  return std::clamp(base - jitter, 0.01, 1.0);
}

// Integer box with the configured size range, fully inside the frame
// margins. Returns x1 y1 x2 y2.
std::array<int, 4> random_box(const SceneSpec & spec, Rng & rng)
{
  const int max_w = std::min(spec.max_box, spec.frame_width - 2 * spec.margin);
  const int max_h = std::min(spec.max_box, spec.frame_height - 2 * spec.margin);
  const int w = static_cast<int>(rng.uniform_int(spec.min_box, max_w));
  const int h = static_cast<int>(rng.uniform_int(spec.min_box, max_h));
  const int x1 = static_cast<int>(rng.uniform_int(spec.margin, spec.frame_width - spec.margin - w));
  const int y1 = static_cast<int>(rng.uniform_int(spec.margin, spec.frame_height - spec.margin - h));
  return {x1, y1, x1 + w, y1 + h};
}

bool boxes_overlap(const std::array<int, 4> & a, const std::array<int, 4> & b)
{
  return a[0] < b[2] && b[0] < a[2] && a[1] < b[3] && b[1] < a[3];
}

std::vector<FramePlan> build_plans(const SceneSpec & spec)
{
  validate(spec);
  const Rng master(spec.seed);

  std::vector<FramePlan> plans;
  plans.reserve(spec.frames);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const Rng frame_rng = master.fork(f);
    Rng place_rng = frame_rng.fork(0);
    Rng det_rng = frame_rng.fork(1);

    FramePlan plan;
    char id[16];
    std::snprintf(id, sizeof(id), "%06zu", f);
    plan.gt.frame_id = id;
    plan.gt.width = spec.frame_width;
    plan.gt.height = spec.frame_height;

    const std::size_t n_obj = static_cast<std::size_t>(place_rng.uniform_int(
      static_cast<std::int64_t>(spec.min_objects), static_cast<std::int64_t>(spec.max_objects)));

    std::vector<std::array<int, 4>> placed;
    for (std::size_t o = 0; o < n_obj; ++o) {
      const int class_id = static_cast<int>(place_rng.uniform_int(0, spec.classes - 1));
      bool ok = false;
      for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
        const std::array<int, 4> box = random_box(spec, place_rng);
        ok = std::none_of(placed.begin(), placed.end(), [&box](const std::array<int, 4> & other) {
          return boxes_overlap(box, other);
        });
        if (ok) {
          placed.push_back(box);
        }
      }
      if (!ok) {
        throw std::runtime_error(
          "generate: could not place a non-overlapping object in frame " + plan.gt.frame_id +
          " after " + std::to_string(kPlacementRetries) + " attempts");
      }
      GroundTruthObject gt;
      gt.class_id = class_id;
      const std::array<int, 4> & box = placed.back();
      gt.bbox = Box{
        Corner{static_cast<double>(box[0]), static_cast<double>(box[1])},
        Corner{static_cast<double>(box[2]), static_cast<double>(box[3])}};
      gt.mask = box_pixels(gt.bbox, spec.frame_width, spec.frame_height);
      plan.gt.ground_truths.push_back(std::move(gt));
    }

    for (const GroundTruthObject & gt : plan.gt.ground_truths) {
      const bool dropped = det_rng.bernoulli(spec.fn_rate);
      if (dropped) {
        continue;
      }
      const bool weak = det_rng.bernoulli(spec.weak_rate);
      const double base_conf =
        weak ? det_rng.uniform(spec.weak_conf_lo, spec.weak_conf_hi) : 1.0;

      PlannedDetection det;
      det.class_id = gt.class_id;
      det.objectness = noisy_objectness(spec, base_conf, det_rng);
      det.corners = {gt.bbox.tl.x, gt.bbox.tl.y, gt.bbox.br.x, gt.bbox.br.y};
      det.unit_noise = draw_unit_noise(det_rng, spec.samples);
      plan.dets.push_back(std::move(det));
    }

    std::size_t n_fp = static_cast<std::size_t>(std::floor(spec.fp_rate));
    if (det_rng.bernoulli(spec.fp_rate - std::floor(spec.fp_rate))) {
      ++n_fp;
    }
    for (std::size_t fp = 0; fp < n_fp; ++fp) {
      PlannedDetection det;
      det.class_id = static_cast<int>(det_rng.uniform_int(0, spec.classes - 1));
      // False positives stay clear of every placed box so suppression cannot
      // merge them into a real detection.
      std::array<int, 4> box{};
      bool ok = false;
      for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
        box = random_box(spec, det_rng);
        ok = std::none_of(placed.begin(), placed.end(), [&box](const std::array<int, 4> & other) {
          return boxes_overlap(box, other);
        });
      }
      if (!ok) {
        throw std::runtime_error(
          "generate: could not place a non-overlapping false positive in frame " +
          plan.gt.frame_id + " after " + std::to_string(kPlacementRetries) + " attempts");
      }
      placed.push_back(box);
      det.corners = {
        static_cast<double>(box[0]), static_cast<double>(box[1]), static_cast<double>(box[2]),
        static_cast<double>(box[3])};
      const double base_conf = det_rng.uniform(spec.fp_conf_lo, spec.fp_conf_hi);
      det.objectness = noisy_objectness(spec, base_conf, det_rng);
      det.unit_noise = draw_unit_noise(det_rng, spec.samples);
      plan.dets.push_back(std::move(det));
    }

    plans.push_back(std::move(plan));
  }
  return plans;
}

std::vector<FrameSamples> materialize(
  const std::vector<FramePlan> & plans, double sigma, int classes)
{
  std::vector<FrameSamples> dump;
  dump.reserve(plans.size());
  for (const FramePlan & plan : plans) {
    FrameSamples fs;
    fs.frame_id = plan.gt.frame_id;
    fs.detections.reserve(plan.dets.size());
    for (const PlannedDetection & det : plan.dets) {
      SampleSet set;
      set.samples.reserve(det.unit_noise.size());
      for (const std::array<double, 4> & u : det.unit_noise) {
        const double x1 = det.corners[0] + sigma * u[0];
        const double y1 = det.corners[1] + sigma * u[1];
        const double x2 = det.corners[2] + sigma * u[2];
        const double y2 = det.corners[3] + sigma * u[3];
        RawBox sample;
        sample.cx = 0.5 * (x1 + x2);
        sample.cy = 0.5 * (y1 + y2);
        sample.width = x2 - x1;
        sample.height = y2 - y1;
        sample.objectness = det.objectness;
        sample.class_scores.assign(static_cast<std::size_t>(classes), 0.0);
        sample.class_scores[static_cast<std::size_t>(det.class_id)] = 1.0;
        set.samples.push_back(std::move(sample));
      }
      fs.detections.push_back(std::move(set));
    }
    dump.push_back(std::move(fs));
  }
  return dump;
}

}  // namespace

SyntheticScene generate(const SceneSpec & spec)
{
  const std::vector<FramePlan> plans = build_plans(spec);
  SyntheticScene scene;
  scene.ground_truth.reserve(plans.size());
  for (const FramePlan & plan : plans) {
    scene.ground_truth.push_back(plan.gt);
  }
  scene.dump = materialize(plans, spec.sigma, spec.classes);
  return scene;
}

SeverityLadder severity_ladder(const SceneSpec & spec, std::size_t levels)
{
  const std::vector<FramePlan> plans = build_plans(spec);
  SeverityLadder ladder;
  ladder.ground_truth.reserve(plans.size());
  for (const FramePlan & plan : plans) {
    ladder.ground_truth.push_back(plan.gt);
  }
  for (std::size_t level = 0; level <= levels; ++level) {
    const double sigma = spec.sigma + static_cast<double>(level) * spec.sigma_step;
    ladder.sigmas.push_back(sigma);
    ladder.dumps.push_back(materialize(plans, sigma, spec.classes));
  }
  return ladder;
}

}  // namespace probdet
