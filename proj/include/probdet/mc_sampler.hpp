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

#ifndef PROBDET_MC_SAMPLER_HPP_
#define PROBDET_MC_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "probdet/rng.hpp"

namespace probdet
{

using Tensor = std::vector<float>;

// Fully connected layer, weights row-major [out_dim][in_dim].
struct DenseLayer
{
  std::size_t out_dim = 0;
  std::size_t in_dim = 0;
  std::vector<float> weights;
  bool relu = true;

  std::size_t macs() const { return out_dim * in_dim; }
};

// Dropout configuration: `placement` lists the head layers the dropout is
// applied before (by index into SplitPipeline::head).
struct DropoutSpec
{
  double rate = 0.25;
  std::vector<std::size_t> placement;
};

// Pipeline split into a deterministic prefix and a stochastic head. Only
// the head contains dropout points, so the prefix output can be computed
// once and reused across Monte-Carlo passes.
struct SplitPipeline
{
  std::vector<DenseLayer> prefix;
  std::vector<DenseLayer> head;
  DropoutSpec dropout;

  std::size_t prefix_macs() const;
  std::size_t head_macs() const;
  // Fraction of per-pass multiply-accumulate work spent in the head.
  double head_share() const;
};

// Inverted dropout: elementwise Bernoulli(1-rate) mask, survivors scaled by
// 1/(1-rate) so the expectation matches the input. Throws
// std::invalid_argument unless rate is in [0, 1). rate 0 is the identity
// and consumes no randomness.
Tensor dropout(const Tensor & x, double rate, Rng & rng);

Tensor forward_prefix(const SplitPipeline & p, const Tensor & x);

// One stochastic head pass over a prefix output, drawing masks from
// pass_rng in layer order.
Tensor forward_head(const SplitPipeline & p, const Tensor & z, Rng & pass_rng);

// Full pass with dropout disabled.
Tensor forward_deterministic(const SplitPipeline & p, const Tensor & x);

// N stochastic passes, each running the full pipeline. Pass j draws its
// masks from rng.fork(j), so the sample list is a pure function of rng's
// state.
std::vector<Tensor> naive_sample(
  const SplitPipeline & p, const Tensor & x, std::size_t n, const Rng & rng);

// N stochastic passes reusing a single prefix evaluation. Mask streams are
// forked exactly as in naive_sample, so the outputs are bitwise identical
// to naive_sample for equal arguments.
std::vector<Tensor> cached_sample(
  const SplitPipeline & p, const Tensor & x, std::size_t n, const Rng & rng);

struct BenchConfig
{
  std::size_t prefix_depth = 12;
  std::size_t prefix_width = 512;
  std::size_t head_depth = 2;
  std::size_t head_width = 667;
  double dropout_rate = 0.25;
  std::size_t samples = 10;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

// Random dense pipeline with the configured shape: prefix_depth square
// layers of prefix_width, then head_depth layers of head_width with a
// dropout point before each. Weights are scaled so activations stay O(1)
// at any depth.
SplitPipeline make_pipeline(const BenchConfig & cfg, Rng & rng);

// Uniform(0,1) input vector for the pipeline.
Tensor make_input(const BenchConfig & cfg, Rng & rng);

struct BenchReport
{
  double t_det_us = 0.0;     // median single deterministic pass
  double t_naive_us = 0.0;   // median N-sample naive run
  double t_cached_us = 0.0;  // median N-sample cached run
  double naive_over_det = 0.0;
  double cached_over_det = 0.0;
  double naive_over_cached = 0.0;
  double head_share = 0.0;
  std::size_t samples = 0;
  std::size_t trials = 0;
  std::size_t cache_bytes = 0;   // size of the cached prefix output
  long maxrss_delta_kb = 0;      // informational peak-RSS change
};

// Times deterministic, naive, and cached inference (median over `trials`
// timed runs each, after 10 discarded warmup runs, single-threaded).
// Throws std::invalid_argument when cfg.trials < 30.
BenchReport bench(const SplitPipeline & p, const Tensor & x, const BenchConfig & cfg);

// Text config: `key value` lines (# comments allowed) with the BenchConfig
// field names as keys. Unknown keys are rejected by name.
BenchConfig parse_bench_config(std::istream & in);

// One-row CSV with a header, all ratios included.
void write_bench_csv(std::ostream & out, const BenchReport & report);

}  // namespace probdet

#endif  // PROBDET_MC_SAMPLER_HPP_
