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

#ifndef PROBDET_GEOMETRY_HPP_
#define PROBDET_GEOMETRY_HPP_

#include <string>
#include <vector>

namespace probdet
{

// Coordinate conventions used throughout: pixels are 0-indexed from the
// top-left image corner, x grows right, y grows down. Pixel (ix, iy) is the
// unit square [ix, ix+1) x [iy, iy+1) with center (ix+0.5, iy+0.5).

struct Corner
{
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned box in corner form; tl is strictly up-left of br.
struct Box
{
  Corner tl;
  Corner br;

  double width() const { return br.x - tl.x; }
  double height() const { return br.y - tl.y; }
  double area() const { return width() * height(); }
};

/// One detector output slot: box center/size plus objectness and per-class
/// scores. class_scores has one entry per dataset class.
struct RawBox
{
  double cx = 0.0;
  double cy = 0.0;
  double width = 0.0;
  double height = 0.0;
  double objectness = 0.0;
  std::vector<double> class_scores;
};

/// Symmetric 2x2 covariance (pixels^2). Symmetry is structural: only the
/// upper triangle is stored and yx() mirrors xy.
struct CovMatrix2
{
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double yx() const { return xy; }
  double trace() const { return xx + yy; }
  double det() const { return xx * yy - xy * xy; }

  /// Positive semi-definiteness up to `tol` on the determinant.
  bool is_psd(double tol = 1e-9) const
  {
    return xx >= 0.0 && yy >= 0.0 && det() >= -tol;
  }

  bool is_zero() const { return xx == 0.0 && xy == 0.0 && yy == 0.0; }

  /// Builds from all four entries, rejecting asymmetric input.
  /// Throws std::invalid_argument when |xy - yx| exceeds a small tolerance.
  static CovMatrix2 from_entries(double xx, double xy, double yx, double yy);
};

/// Probabilistic detection: corner-form box, one covariance per corner, and
/// per-class label probabilities (class scores scaled by objectness, so the
/// vector need not sum to 1).
struct ProbBox
{
  Corner tl;
  Corner br;
  CovMatrix2 cov_tl;
  CovMatrix2 cov_br;
  std::vector<double> label_probs;

  Box box() const { return Box{tl, br}; }
};

struct PixelCoord
{
  int x = 0;
  int y = 0;

  bool operator==(const PixelCoord &) const = default;
};

/// Ground-truth object: class, tight bounding box, and the segment given as
/// the set of covered pixels.
struct GroundTruthObject
{
  int class_id = 0;
  Box bbox;
  std::vector<PixelCoord> mask;  // row-major order, no duplicates
};

/// One evaluated image with its annotations and (fused) detections.
struct Frame
{
  std::string frame_id;
  int width = 0;
  int height = 0;
  std::vector<GroundTruthObject> ground_truths;
  std::vector<ProbBox> detections;
};

/// Center/size to corner form. Throws std::invalid_argument when width or
/// height is not strictly positive.
Box to_corner_form(const RawBox & b);

/// Intersection over union by continuous area; 0 for disjoint boxes.
double iou(const Box & a, const Box & b);

/// A pixel belongs to a box when its center lies inside [tl, br) on both
/// axes.
bool pixel_in_box(const Box & b, int ix, int iy);

/// All pixels of `b` (by the center rule), clipped to the frame.
std::vector<PixelCoord> box_pixels(const Box & b, int frame_width, int frame_height);

/// Tight bounding box of a non-empty pixel set: the union of the pixels'
/// unit squares. Throws std::invalid_argument on an empty mask.
Box tight_bbox(const std::vector<PixelCoord> & mask);

}  // namespace probdet

#endif  // PROBDET_GEOMETRY_HPP_
