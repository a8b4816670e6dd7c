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

#include "probdet/bvn.hpp"

#include <algorithm>
#include <cmath>

namespace probdet
{
namespace
{

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Gauss-Legendre abscissae and weights for the Genz algorithm, one half of
// each symmetric rule (6, 12, and 20 points).
constexpr double kW6[3] = {
  0.1713244923791704, 0.3607615730481386, 0.4679139345726910};
constexpr double kX6[3] = {
  -0.9324695142031521, -0.6612093864662645, -0.2386191860831969};

constexpr double kW12[6] = {
  0.04717533638651183, 0.1069393259953184, 0.1600783285433462,
  0.2031674267230659, 0.2334925365383548, 0.2491470458134028};
constexpr double kX12[6] = {
  -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
  -0.5873179542866175, -0.3678314989981802, -0.1252334085114689};

constexpr double kW20[10] = {
  0.01761400713915212, 0.04060142980038694, 0.06267204833410907,
  0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
  0.1316886384491766, 0.1420961093183820, 0.1491729864726037,
  0.1527533871307258};
constexpr double kX20[10] = {
  -0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
  -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
  -0.5108670019508271, -0.3737060887154195, -0.2277858511416451,
  -0.07652652113349734};

// Genz's BVND: P(X > dh, Y > dk) for standard bivariate normal with
// correlation r, after his published TVPACK routine (Drezner & Wesolowsky
// method with Gauss-Legendre quadrature).
double bvnd(double dh, double dk, double r)
{
  const double * w = kW6;
  const double * x = kX6;
  int ng = 3;
  if (std::abs(r) >= 0.75) {
    w = kW20;
    x = kX20;
    ng = 10;
  } else if (std::abs(r) >= 0.3) {
    w = kW12;
    x = kX12;
    ng = 6;
  }

  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;

  if (std::abs(r) < 0.925) {
    if (std::abs(r) > 0.0) {
      const double hs = (h * h + k * k) / 2.0;
      const double asr = std::asin(r);
      for (int i = 0; i < ng; ++i) {
        for (int sign = -1; sign <= 1; sign += 2) {
          const double sn = std::sin(asr * (sign * x[i] + 1.0) / 2.0);
          bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      }
      bvn = bvn * asr / (2.0 * kTwoPi);
    }
    bvn += norm_cdf(-h) * norm_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (std::abs(r) < 1.0) {
      const double as = (1.0 - r) * (1.0 + r);
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 16.0;
      double asr = -(bs / as + hk) / 2.0;
      if (asr > -100.0) {
        bvn = a * std::exp(asr) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
      }
      if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(kTwoPi) * norm_cdf(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
      }
      a /= 2.0;
      for (int i = 0; i < ng; ++i) {
        for (int sign = -1; sign <= 1; sign += 2) {
          const double xs_val = a * (sign * x[i] + 1.0);
          const double xs = xs_val * xs_val;
          const double rs = std::sqrt(1.0 - xs);
          asr = -(bs / xs + hk) / 2.0;
          if (asr > -100.0) {
            const double sp = 1.0 + c * xs * (1.0 + d * xs);
            const double ep = std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
            bvn += a * w[i] * std::exp(asr) * (ep - sp);
          }
        }
      }
      bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) {
      bvn += norm_cdf(-std::max(h, k));
    } else {
      bvn = -bvn;
      if (k > h) {
        bvn += norm_cdf(k) - norm_cdf(h);
      }
    }
  }
  return bvn;
}

}  // namespace

double norm_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double bvn_cdf_standard(double x, double y, double rho)
{
  double p;
  if (rho >= 1.0) {
    p = norm_cdf(std::min(x, y));
  } else if (rho <= -1.0) {
    p = std::max(0.0, norm_cdf(x) + norm_cdf(y) - 1.0);
  } else {
    // BVND computes the upper-orthant probability; negate the bounds for
    // the CDF.
    p = bvnd(-x, -y, rho);
  }
  return std::clamp(p, 0.0, 1.0);
}

double bvn_cdf(double x, double y, const CovMatrix2 & cov)
{
  const double vx = cov.xx;
  const double vy = cov.yy;

  if (vx <= 0.0 && vy <= 0.0) {
    return (x >= 0.0 && y >= 0.0) ? 1.0 : 0.0;
  }
  if (vx <= 0.0) {
    return x >= 0.0 ? norm_cdf(y / std::sqrt(vy)) : 0.0;
  }
  if (vy <= 0.0) {
    return y >= 0.0 ? norm_cdf(x / std::sqrt(vx)) : 0.0;
  }

  const double sx = std::sqrt(vx);
  const double sy = std::sqrt(vy);
  double rho = cov.xy / (sx * sy);
  rho = std::clamp(rho, -1.0, 1.0);
  return bvn_cdf_standard(x / sx, y / sy, rho);
}

}  // namespace probdet
