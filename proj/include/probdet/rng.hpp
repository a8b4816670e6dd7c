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

#ifndef PROBDET_RNG_HPP_
#define PROBDET_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace probdet
{

/// Deterministic pseudo-random stream (splitmix64 core).
///
/// The generator is fully specified here, so equal seeds give bit-identical
/// streams on every platform and standard library. Distribution transforms
/// (uniform, normal) are implemented explicitly for the same reason; do not
/// swap them for std::normal_distribution, which is implementation-defined.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64()
  {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) using the top 53 bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive. Modulo bias is negligible for
  /// the small ranges used here.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
  {
    return lo + static_cast<std::int64_t>(
                  next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller; the sine variate of each pair is cached.
  double normal()
  {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) {
      u1 = uniform01();
    }
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Derives an independent child stream identified by `id`. Equal parent
  /// state and id always give the same child, so forked work stays
  /// reproducible no matter how it is scheduled.
  Rng fork(std::uint64_t id) const
  {
    Rng child(state_ ^ (0x632be59bd9b4e019ULL * (id + 0x9e3779b97f4a7c15ULL)));
    child.next_u64();
    return child;
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace probdet

#endif  // PROBDET_RNG_HPP_
