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

#include <stdexcept>

#include "probdet/geometry.hpp"

using namespace probdet;

TEST_CASE("to_corner_form converts center form and rejects degenerate boxes")
{
  RawBox b;
  b.cx = 5.0;
  b.cy = 3.0;
  b.width = 4.0;
  b.height = 2.0;
  const Box corner = to_corner_form(b);
  CHECK(corner.tl.x == 3.0);
  CHECK(corner.tl.y == 2.0);
  CHECK(corner.br.x == 7.0);
  CHECK(corner.br.y == 4.0);

  b.width = 0.0;
  CHECK_THROWS_AS(to_corner_form(b), std::invalid_argument);
  b.width = 4.0;
  b.height = -1.0;
  CHECK_THROWS_AS(to_corner_form(b), std::invalid_argument);
}

TEST_CASE("iou handles identity, disjoint, and partial overlap")
{
  const Box a{Corner{0.0, 0.0}, Corner{2.0, 2.0}};
  const Box b{Corner{1.0, 0.0}, Corner{3.0, 2.0}};
  const Box c{Corner{10.0, 10.0}, Corner{12.0, 12.0}};

  CHECK(iou(a, a) == doctest::Approx(1.0));
  CHECK(iou(a, c) == 0.0);
  CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(iou(b, a) == iou(a, b));

  const Box touching{Corner{2.0, 0.0}, Corner{4.0, 2.0}};
  CHECK(iou(a, touching) == 0.0);
}

TEST_CASE("pixel_in_box uses the pixel-center rule")
{
  const Box b{Corner{1.0, 1.0}, Corner{3.0, 3.0}};
  CHECK(pixel_in_box(b, 1, 1));
  CHECK(pixel_in_box(b, 2, 2));
  CHECK_FALSE(pixel_in_box(b, 0, 1));
  CHECK_FALSE(pixel_in_box(b, 3, 1));
  CHECK_FALSE(pixel_in_box(b, 1, 3));

  const Box half{Corner{0.5, 0.5}, Corner{2.5, 2.5}};
  CHECK(pixel_in_box(half, 0, 0));
  CHECK(pixel_in_box(half, 1, 1));
  CHECK_FALSE(pixel_in_box(half, 2, 2));
}

TEST_CASE("box_pixels matches the center rule and clips to the frame")
{
  const Box b{Corner{1.0, 1.0}, Corner{3.0, 3.0}};
  const auto pixels = box_pixels(b, 10, 10);
  REQUIRE(pixels.size() == 4);
  CHECK(pixels[0] == PixelCoord{1, 1});
  CHECK(pixels[1] == PixelCoord{2, 1});
  CHECK(pixels[2] == PixelCoord{1, 2});
  CHECK(pixels[3] == PixelCoord{2, 2});

  for (const PixelCoord & p : pixels) {
    CHECK(pixel_in_box(b, p.x, p.y));
  }

  const Box fractional{Corner{0.5, 0.0}, Corner{2.5, 1.0}};
  const auto frac_pixels = box_pixels(fractional, 10, 10);
  REQUIRE(frac_pixels.size() == 2);
  CHECK(frac_pixels[0] == PixelCoord{0, 0});
  CHECK(frac_pixels[1] == PixelCoord{1, 0});

  const Box overhang{Corner{-5.0, -5.0}, Corner{1.0, 1.0}};
  const auto clipped = box_pixels(overhang, 10, 10);
  REQUIRE(clipped.size() == 1);
  CHECK(clipped[0] == PixelCoord{0, 0});

  const Box outside{Corner{20.0, 20.0}, Corner{30.0, 30.0}};
  CHECK(box_pixels(outside, 10, 10).empty());
}

TEST_CASE("box_pixels enumerates row-major")
{
  const Box b{Corner{0.0, 0.0}, Corner{3.0, 2.0}};
  const auto pixels = box_pixels(b, 8, 8);
  REQUIRE(pixels.size() == 6);
  for (std::size_t i = 1; i < pixels.size(); ++i) {
    const bool later_row = pixels[i].y > pixels[i - 1].y;
    const bool same_row_right = pixels[i].y == pixels[i - 1].y && pixels[i].x > pixels[i - 1].x;
    CHECK((later_row || same_row_right));
  }
}

TEST_CASE("tight_bbox inverts box_pixels for integer boxes")
{
  const Box b{Corner{2.0, 3.0}, Corner{6.0, 5.0}};
  const auto pixels = box_pixels(b, 20, 20);
  const Box back = tight_bbox(pixels);
  CHECK(back.tl.x == b.tl.x);
  CHECK(back.tl.y == b.tl.y);
  CHECK(back.br.x == b.br.x);
  CHECK(back.br.y == b.br.y);

  CHECK_THROWS_AS(tight_bbox({}), std::invalid_argument);
}

TEST_CASE("CovMatrix2 helpers")
{
  const CovMatrix2 m = CovMatrix2::from_entries(2.0, 0.5, 0.5, 1.0);
  CHECK(m.xx == 2.0);
  CHECK(m.xy == 0.5);
  CHECK(m.yy == 1.0);
  CHECK(m.trace() == 3.0);
  CHECK(m.det() == doctest::Approx(1.75));
  CHECK(m.is_psd());
  CHECK_FALSE(m.is_zero());
  CHECK(CovMatrix2{}.is_zero());

  CHECK_THROWS_AS(CovMatrix2::from_entries(1.0, 0.5, -0.5, 1.0), std::invalid_argument);

  const CovMatrix2 indefinite = CovMatrix2::from_entries(1.0, 2.0, 2.0, 1.0);
  CHECK_FALSE(indefinite.is_psd());
}

TEST_CASE("Box accessors")
{
  const Box b{Corner{1.0, 2.0}, Corner{4.0, 8.0}};
  CHECK(b.width() == 3.0);
  CHECK(b.height() == 6.0);
  CHECK(b.area() == 18.0);
}
