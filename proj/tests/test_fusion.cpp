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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "probdet/fusion.hpp"
#include "probdet/rng.hpp"

using namespace probdet;

namespace
{

RawBox raw_box(double cx, double cy, double w, double h, double obj, std::vector<double> scores)
{
  RawBox b;
  b.cx = cx;
  b.cy = cy;
  b.width = w;
  b.height = h;
  b.objectness = obj;
  b.class_scores = std::move(scores);
  return b;
}

RawBox from_corners(double x1, double y1, double x2, double y2, double obj = 1.0)
{
  return raw_box(0.5 * (x1 + x2), 0.5 * (y1 + y2), x2 - x1, y2 - y1, obj, {1.0});
}

}  // namespace

TEST_CASE("confidence_of is objectness times the best class score")
{
  CHECK(confidence_of(raw_box(0, 0, 1, 1, 0.8, {0.1, 0.6, 0.3})) == doctest::Approx(0.48));
  CHECK(confidence_of(raw_box(0, 0, 1, 1, 1.0, {0.2})) == doctest::Approx(0.2));
  CHECK(confidence_of(raw_box(0, 0, 1, 1, 0.9, {})) == 0.0);
}

TEST_CASE("pre_nms_average is the componentwise mean")
{
  SampleSet s;
  s.samples.push_back(raw_box(1.0, 2.0, 4.0, 6.0, 0.8, {0.2, 0.8}));
  s.samples.push_back(raw_box(3.0, 4.0, 2.0, 2.0, 0.4, {0.6, 0.4}));
  const RawBox mean = pre_nms_average(s);
  CHECK(mean.cx == doctest::Approx(2.0));
  CHECK(mean.cy == doctest::Approx(3.0));
  CHECK(mean.width == doctest::Approx(3.0));
  CHECK(mean.height == doctest::Approx(4.0));
  CHECK(mean.objectness == doctest::Approx(0.6));
  REQUIRE(mean.class_scores.size() == 2);
  CHECK(mean.class_scores[0] == doctest::Approx(0.4));
  CHECK(mean.class_scores[1] == doctest::Approx(0.6));
}

TEST_CASE("pre_nms_average rejects empty and inconsistent sets")
{
  CHECK_THROWS_AS(pre_nms_average(SampleSet{}), std::invalid_argument);

  SampleSet mixed;
  mixed.samples.push_back(raw_box(0, 0, 1, 1, 1.0, {0.5, 0.5}));
  mixed.samples.push_back(raw_box(0, 0, 1, 1, 1.0, {1.0}));
  CHECK_THROWS_AS(pre_nms_average(mixed), std::invalid_argument);
}

TEST_CASE("suppress keeps boxes at the confidence threshold and drops below")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.5;
  cfg.frame_width = 100;
  cfg.frame_height = 100;

  std::vector<RawBox> boxes;
  boxes.push_back(raw_box(10, 10, 4, 4, 0.5, {1.0}));
  boxes.push_back(raw_box(30, 30, 4, 4, 0.499999, {1.0}));
  const auto kept = suppress(boxes, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 0);
}

TEST_CASE("suppress drops boxes with any corner outside the frame")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.1;
  cfg.frame_width = 100;
  cfg.frame_height = 80;

  std::vector<RawBox> boxes;
  boxes.push_back(from_corners(0.0, 0.0, 100.0, 80.0));
  boxes.push_back(from_corners(-0.01, 10.0, 20.0, 20.0));
  boxes.push_back(from_corners(90.0, 10.0, 100.01, 20.0));
  boxes.push_back(from_corners(10.0, 70.0, 20.0, 80.5));
  const auto kept = suppress(boxes, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 0);
}

TEST_CASE("suppress drops degenerate averaged boxes")
{
  FilterConfig cfg;
  cfg.frame_width = 100;
  cfg.frame_height = 100;

  std::vector<RawBox> boxes;
  boxes.push_back(raw_box(10, 10, 0.0, 4, 1.0, {1.0}));
  boxes.push_back(raw_box(10, 10, 4, -2.0, 1.0, {1.0}));
  CHECK(suppress(boxes, cfg).empty());
}

TEST_CASE("suppress keeps overlapping boxes at IoU one third")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.1;
  cfg.iou_threshold = 0.6;
  cfg.frame_width = 10;
  cfg.frame_height = 10;

  std::vector<RawBox> boxes;
  boxes.push_back(from_corners(1.0, 0.0, 3.0, 2.0, 0.8));
  boxes.push_back(from_corners(0.0, 0.0, 2.0, 2.0, 0.9));
  const auto kept = suppress(boxes, cfg);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0] == 1);
  CHECK(kept[1] == 0);
}

TEST_CASE("suppress removes the lower-confidence duplicate above the IoU threshold")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.1;
  cfg.iou_threshold = 0.6;
  cfg.frame_width = 10;
  cfg.frame_height = 10;

  std::vector<RawBox> boxes;
  boxes.push_back(from_corners(1.0, 1.0, 5.0, 5.0, 0.7));
  boxes.push_back(from_corners(1.0, 1.0, 5.0, 5.0, 0.9));
  const auto kept = suppress(boxes, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 1);
}

TEST_CASE("suppress breaks confidence ties by input order")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.1;
  cfg.frame_width = 100;
  cfg.frame_height = 100;

  std::vector<RawBox> boxes;
  boxes.push_back(from_corners(10.0, 10.0, 14.0, 14.0, 0.5));
  boxes.push_back(from_corners(40.0, 40.0, 44.0, 44.0, 0.5));
  const auto kept = suppress(boxes, cfg);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0] == 0);
  CHECK(kept[1] == 1);
}

TEST_CASE("corner_covariances matches the hand fixture")
{
  SampleSet s;
  s.samples.push_back(from_corners(0.0, 0.0, 4.0, 4.0));
  s.samples.push_back(from_corners(2.0, 0.0, 4.0, 4.0));
  const CornerCovariances covs = corner_covariances(s);
  CHECK_FALSE(covs.deterministic);
  CHECK(covs.tl.xx == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(covs.tl.xy == 0.0);
  CHECK(covs.tl.yy == 0.0);
  CHECK(covs.br.is_zero());
}

TEST_CASE("corner_covariances with one sample is zero and deterministic")
{
  SampleSet s;
  s.samples.push_back(from_corners(1.0, 1.0, 3.0, 3.0));
  const CornerCovariances covs = corner_covariances(s);
  CHECK(covs.deterministic);
  CHECK(covs.tl.is_zero());
  CHECK(covs.br.is_zero());

  CHECK_THROWS_AS(corner_covariances(SampleSet{}), std::invalid_argument);
}

TEST_CASE("corner_covariances tolerates non-positive sampled extents")
{
  SampleSet s;
  s.samples.push_back(raw_box(1.0, 1.0, -1.0, 2.0, 1.0, {1.0}));
  s.samples.push_back(raw_box(1.0, 1.0, 1.0, 2.0, 1.0, {1.0}));
  const CornerCovariances covs = corner_covariances(s);
  // TL x samples are 1.5 and 0.5, so the unbiased variance is 0.5.
  CHECK(covs.tl.xx == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(covs.tl.yy == 0.0);
}

TEST_CASE("corner_covariances is the unbiased sample covariance")
{
  Rng rng(42);
  SampleSet s;
  const int n = 6;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i < n; ++i) {
    const double x1 = rng.uniform(0.0, 2.0);
    const double y1 = rng.uniform(0.0, 2.0);
    xs.push_back(x1);
    ys.push_back(y1);
    s.samples.push_back(from_corners(x1, y1, 10.0, 10.0));
  }
  double mx = 0.0;
  double my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx) / (n - 1);
    sxy += (xs[i] - mx) * (ys[i] - my) / (n - 1);
    syy += (ys[i] - my) * (ys[i] - my) / (n - 1);
  }
  const CornerCovariances covs = corner_covariances(s);
  CHECK(covs.tl.xx == doctest::Approx(sxx).epsilon(1e-12));
  CHECK(covs.tl.xy == doctest::Approx(sxy).epsilon(1e-12));
  CHECK(covs.tl.yy == doctest::Approx(syy).epsilon(1e-12));
}

TEST_CASE("psd_repair hand fixture")
{
  const CovMatrix2 m = CovMatrix2::from_entries(1.0, 2.0, 2.0, 1.0);
  const CovMatrix2 repaired = psd_repair(m);
  CHECK(repaired.xx == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(repaired.xy == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(repaired.yy == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(repaired.is_psd());
}

TEST_CASE("psd_repair leaves PSD matrices untouched")
{
  const CovMatrix2 m = CovMatrix2::from_entries(2.0, 0.5, 0.5, 1.0);
  const CovMatrix2 repaired = psd_repair(m);
  CHECK(repaired.xx == m.xx);
  CHECK(repaired.xy == m.xy);
  CHECK(repaired.yy == m.yy);

  CHECK(psd_repair(CovMatrix2{}).is_zero());
}

TEST_CASE("psd_repair maps negative-definite input to zero")
{
  const CovMatrix2 m = CovMatrix2::from_entries(-1.0, 0.25, 0.25, -2.0);
  CHECK(psd_repair(m).is_zero());
}

TEST_CASE("psd_repair equals the rotation-form projection on random matrices")
{
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    CovMatrix2 m;
    m.xx = rng.uniform(-5.0, 5.0);
    m.yy = rng.uniform(-5.0, 5.0);
    m.xy = rng.uniform(-5.0, 5.0);

    const CovMatrix2 repaired = psd_repair(m);
    const CovMatrix2 expected = oracles::nearest_psd(m);
    CHECK(repaired.xx == doctest::Approx(expected.xx).epsilon(1e-9).scale(1.0));
    CHECK(repaired.xy == doctest::Approx(expected.xy).epsilon(1e-9).scale(1.0));
    CHECK(repaired.yy == doctest::Approx(expected.yy).epsilon(1e-9).scale(1.0));

    CHECK(repaired.is_psd(1e-9));

    // Projection optimality: the residual is negative semidefinite and is
    // annihilated by the repaired matrix.
    const double dxx = m.xx - repaired.xx;
    const double dxy = m.xy - repaired.xy;
    const double dyy = m.yy - repaired.yy;
    CHECK(dxx + dyy <= 1e-9);
    CHECK(dxx * dyy - dxy * dxy >= -1e-9);
    CHECK(std::abs(repaired.xx * dxx + repaired.xy * dxy) < 1e-8);
    CHECK(std::abs(repaired.xx * dxy + repaired.xy * dyy) < 1e-8);
    CHECK(std::abs(repaired.xy * dxx + repaired.yy * dxy) < 1e-8);
    CHECK(std::abs(repaired.xy * dxy + repaired.yy * dyy) < 1e-8);
  }
}

TEST_CASE("to_prob_box multiplies class scores by objectness")
{
  const RawBox mean = raw_box(5.0, 5.0, 4.0, 2.0, 0.8, {0.25, 0.75});
  const ProbBox det = to_prob_box(mean, CovMatrix2{}, CovMatrix2{});
  CHECK(det.tl.x == 3.0);
  CHECK(det.tl.y == 4.0);
  CHECK(det.br.x == 7.0);
  CHECK(det.br.y == 6.0);
  REQUIRE(det.label_probs.size() == 2);
  CHECK(det.label_probs[0] == doctest::Approx(0.2));
  CHECK(det.label_probs[1] == doctest::Approx(0.6));
}

TEST_CASE("fuse_frame averages, suppresses, and attaches repaired covariances")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.5;
  cfg.frame_width = 100;
  cfg.frame_height = 100;

  SampleSet strong;
  strong.samples.push_back(from_corners(10.0, 10.0, 20.0, 20.0));
  strong.samples.push_back(from_corners(12.0, 10.0, 20.0, 20.0));

  SampleSet weak;
  weak.samples.push_back(raw_box(50.0, 50.0, 10.0, 10.0, 0.2, {1.0}));

  const auto fused = fuse_frame({weak, strong}, cfg);
  REQUIRE(fused.size() == 1);
  CHECK(fused[0].tl.x == doctest::Approx(11.0));
  CHECK(fused[0].tl.y == doctest::Approx(10.0));
  CHECK(fused[0].br.x == doctest::Approx(20.0));
  CHECK(fused[0].br.y == doctest::Approx(20.0));
  CHECK(fused[0].cov_tl.xx == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fused[0].cov_tl.yy == 0.0);
  CHECK(fused[0].cov_br.is_zero());
  REQUIRE(fused[0].label_probs.size() == 1);
  CHECK(fused[0].label_probs[0] == doctest::Approx(1.0));
  CHECK(fused[0].cov_tl.is_psd());
}

TEST_CASE("fuse_frame output follows confidence order")
{
  FilterConfig cfg;
  cfg.conf_threshold = 0.1;
  cfg.frame_width = 100;
  cfg.frame_height = 100;

  SampleSet low;
  low.samples.push_back(raw_box(20.0, 20.0, 8.0, 8.0, 0.6, {1.0}));
  SampleSet high;
  high.samples.push_back(raw_box(60.0, 60.0, 8.0, 8.0, 0.9, {1.0}));

  const auto fused = fuse_frame({low, high}, cfg);
  REQUIRE(fused.size() == 2);
  CHECK(fused[0].tl.x == doctest::Approx(56.0));
  CHECK(fused[1].tl.x == doctest::Approx(16.0));
}
