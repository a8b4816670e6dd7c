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

#include "probdet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace probdet
{

CovMatrix2 CovMatrix2::from_entries(double xx, double xy, double yx, double yy)
{
  if (std::abs(xy - yx) > 1e-12 * std::max(1.0, std::max(std::abs(xy), std::abs(yx)))) {
    throw std::invalid_argument("covariance matrix is not symmetric");
  }
  return CovMatrix2{xx, xy, yy};
}

Box to_corner_form(const RawBox & b)
{
  if (!(b.width > 0.0) || !(b.height > 0.0)) {
    throw std::invalid_argument("degenerate box: width and height must be > 0");
  }
  Box out;
  out.tl = Corner{b.cx - b.width / 2.0, b.cy - b.height / 2.0};
  out.br = Corner{b.cx + b.width / 2.0, b.cy + b.height / 2.0};
  return out;
}

double iou(const Box & a, const Box & b)
{
  const double ix = std::min(a.br.x, b.br.x) - std::max(a.tl.x, b.tl.x);
  const double iy = std::min(a.br.y, b.br.y) - std::max(a.tl.y, b.tl.y);
  if (ix <= 0.0 || iy <= 0.0) {
    return 0.0;
  }
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

bool pixel_in_box(const Box & b, int ix, int iy)
{
  const double cx = ix + 0.5;
  const double cy = iy + 0.5;
  return cx >= b.tl.x && cx < b.br.x && cy >= b.tl.y && cy < b.br.y;
}

namespace
{

// First and one-past-last pixel index whose center falls in [lo, hi).
inline int first_pixel(double lo) { return static_cast<int>(std::ceil(lo - 0.5)); }
inline int end_pixel(double hi) { return static_cast<int>(std::ceil(hi - 0.5)); }

}  // namespace

std::vector<PixelCoord> box_pixels(const Box & b, int frame_width, int frame_height)
{
  const int x0 = std::max(0, first_pixel(b.tl.x));
  const int x1 = std::min(frame_width, end_pixel(b.br.x));
  const int y0 = std::max(0, first_pixel(b.tl.y));
  const int y1 = std::min(frame_height, end_pixel(b.br.y));
  std::vector<PixelCoord> out;
  if (x1 > x0 && y1 > y0) {
    out.reserve(static_cast<std::size_t>(x1 - x0) * static_cast<std::size_t>(y1 - y0));
  }
  for (int iy = y0; iy < y1; ++iy) {
    for (int ix = x0; ix < x1; ++ix) {
      out.push_back(PixelCoord{ix, iy});
    }
  }
  return out;
}

Box tight_bbox(const std::vector<PixelCoord> & mask)
{
  if (mask.empty()) {
    throw std::invalid_argument("tight_bbox: empty mask");
  }
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = std::numeric_limits<int>::min();
  int max_y = std::numeric_limits<int>::min();
  for (const PixelCoord & p : mask) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  return Box{
    Corner{static_cast<double>(min_x), static_cast<double>(min_y)},
    Corner{static_cast<double>(max_x + 1), static_cast<double>(max_y + 1)}};
}

}  // namespace probdet
