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

#include "probdet/mc_sampler.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <sys/resource.h>

namespace probdet
{
namespace
{

Tensor dense_forward(const DenseLayer & layer, const Tensor & x)
{
  if (x.size() != layer.in_dim) {
    throw std::invalid_argument("dense_forward: input size does not match layer");
  }
  Tensor y(layer.out_dim);
  const float * w = layer.weights.data();
  for (std::size_t o = 0; o < layer.out_dim; ++o) {
    float acc = 0.0f;
    const float * row = w + o * layer.in_dim;
    for (std::size_t i = 0; i < layer.in_dim; ++i) {
      acc += row[i] * x[i];
    }
    y[o] = layer.relu && acc < 0.0f ? 0.0f : acc;
  }
  return y;
}

bool dropout_before(const SplitPipeline & p, std::size_t layer_index)
{
  for (std::size_t idx : p.dropout.placement) {
    if (idx == layer_index) {
      return true;
    }
  }
  return false;
}

double median_of(std::vector<double> & values)
{
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  if (values.size() % 2 == 1) {
    return values[mid];
  }
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

long current_maxrss_kb()
{
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

}  // namespace

std::size_t SplitPipeline::prefix_macs() const
{
  std::size_t total = 0;
  for (const DenseLayer & l : prefix) {
    total += l.macs();
  }
  return total;
}

std::size_t SplitPipeline::head_macs() const
{
  std::size_t total = 0;
  for (const DenseLayer & l : head) {
    total += l.macs();
  }
  return total;
}

double SplitPipeline::head_share() const
{
  const double h = static_cast<double>(head_macs());
  const double p = static_cast<double>(prefix_macs());
  return h + p == 0.0 ? 0.0 : h / (h + p);
}

Tensor dropout(const Tensor & x, double rate, Rng & rng)
{
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("dropout: rate must be in [0, 1)");
  }
  if (rate == 0.0) {
    return x;
  }
  Tensor y(x.size());
  const float scale = static_cast<float>(1.0 / (1.0 - rate));
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = rng.uniform01() >= rate ? x[i] * scale : 0.0f;
  }
  return y;
}

Tensor forward_prefix(const SplitPipeline & p, const Tensor & x)
{
  Tensor z = x;
  for (const DenseLayer & layer : p.prefix) {
    z = dense_forward(layer, z);
  }
  return z;
}

Tensor forward_head(const SplitPipeline & p, const Tensor & z, Rng & pass_rng)
{
  Tensor y = z;
  for (std::size_t l = 0; l < p.head.size(); ++l) {
    if (dropout_before(p, l)) {
      y = dropout(y, p.dropout.rate, pass_rng);
    }
    y = dense_forward(p.head[l], y);
  }
  return y;
}

Tensor forward_deterministic(const SplitPipeline & p, const Tensor & x)
{
  Tensor y = forward_prefix(p, x);
  for (const DenseLayer & layer : p.head) {
    y = dense_forward(layer, y);
  }
  return y;
}

std::vector<Tensor> naive_sample(
  const SplitPipeline & p, const Tensor & x, std::size_t n, const Rng & rng)
{
  if (n == 0) {
    throw std::invalid_argument("naive_sample: need at least one pass");
  }
  std::vector<Tensor> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rng pass_rng = rng.fork(j);
    const Tensor z = forward_prefix(p, x);
    out.push_back(forward_head(p, z, pass_rng));
  }
  return out;
}

std::vector<Tensor> cached_sample(
  const SplitPipeline & p, const Tensor & x, std::size_t n, const Rng & rng)
{
  if (n == 0) {
    throw std::invalid_argument("cached_sample: need at least one pass");
  }
  const Tensor z = forward_prefix(p, x);
  std::vector<Tensor> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rng pass_rng = rng.fork(j);
    out.push_back(forward_head(p, z, pass_rng));
  }
  return out;
}

SplitPipeline make_pipeline(const BenchConfig & cfg, Rng & rng)
{
  if (cfg.prefix_depth == 0 || cfg.head_depth == 0) {
    throw std::invalid_argument("make_pipeline: prefix and head need at least one layer each");
  }
  if (cfg.prefix_width == 0 || cfg.head_width == 0) {
    throw std::invalid_argument("make_pipeline: layer widths must be positive");
  }

  const auto make_layer = [&rng](std::size_t out_dim, std::size_t in_dim, bool relu) {
    DenseLayer layer;
    layer.out_dim = out_dim;
    layer.in_dim = in_dim;
    layer.relu = relu;
    layer.weights.resize(out_dim * in_dim);
    const double bound = std::sqrt(6.0 / static_cast<double>(in_dim));
    for (float & w : layer.weights) {
      w = static_cast<float>(rng.uniform(-bound, bound));
    }
    return layer;
  };

  SplitPipeline p;
  for (std::size_t l = 0; l < cfg.prefix_depth; ++l) {
    p.prefix.push_back(make_layer(cfg.prefix_width, cfg.prefix_width, true));
  }
  std::size_t in_dim = cfg.prefix_width;
  for (std::size_t l = 0; l < cfg.head_depth; ++l) {
    const bool last = l + 1 == cfg.head_depth;
    p.head.push_back(make_layer(cfg.head_width, in_dim, !last));
    in_dim = cfg.head_width;
    p.dropout.placement.push_back(l);
  }
  p.dropout.rate = cfg.dropout_rate;
  return p;
}

Tensor make_input(const BenchConfig & cfg, Rng & rng)
{
  Tensor x(cfg.prefix_width);
  for (float & v : x) {
    v = static_cast<float>(rng.uniform01());
  }
  return x;
}

BenchReport bench(const SplitPipeline & p, const Tensor & x, const BenchConfig & cfg)
{
  if (cfg.trials < 30) {
    throw std::invalid_argument("bench: need at least 30 trials");
  }
  using clock = std::chrono::steady_clock;
  constexpr std::size_t kWarmup = 10;

  // The checksum keeps the optimizer from discarding timed work.
  volatile float sink = 0.0f;
  const auto consume = [&sink](const Tensor & t) {
    float acc = 0.0f;
    for (float v : t) {
      acc += v;
    }
    sink = sink + acc;
  };

  const long rss_before = current_maxrss_kb();
  const Rng base(cfg.seed);

  const auto time_runs = [&](auto && body) {
    std::vector<double> times;
    times.reserve(cfg.trials);
    for (std::size_t t = 0; t < kWarmup + cfg.trials; ++t) {
      const auto start = clock::now();
      body(t);
      const auto stop = clock::now();
      if (t >= kWarmup) {
        times.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
      }
    }
    return median_of(times);
  };

  BenchReport report;
  report.t_det_us = time_runs([&](std::size_t) {
    consume(forward_deterministic(p, x));
  });
  report.t_naive_us = time_runs([&](std::size_t t) {
    for (const Tensor & s : naive_sample(p, x, cfg.samples, base.fork(t))) {
      consume(s);
    }
  });
  report.t_cached_us = time_runs([&](std::size_t t) {
    for (const Tensor & s : cached_sample(p, x, cfg.samples, base.fork(t))) {
      consume(s);
    }
  });

  report.naive_over_det = report.t_naive_us / report.t_det_us;
  report.cached_over_det = report.t_cached_us / report.t_det_us;
  report.naive_over_cached = report.t_naive_us / report.t_cached_us;
  report.head_share = p.head_share();
  report.samples = cfg.samples;
  report.trials = cfg.trials;
  report.cache_bytes = (p.prefix.empty() ? x.size() : p.prefix.back().out_dim) * sizeof(float);
  report.maxrss_delta_kb = current_maxrss_kb() - rss_before;
  return report;
}

BenchConfig parse_bench_config(std::istream & in)
{
  BenchConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) {
      continue;
    }
    std::string value;
    if (!(fields >> value)) {
      throw std::runtime_error(
        "bench config line " + std::to_string(line_no) + ": key '" + key + "' has no value");
    }
    std::string extra;
    if (fields >> extra) {
      throw std::runtime_error(
        "bench config line " + std::to_string(line_no) + ": trailing content after '" + key + "'");
    }

    errno = 0;
    char * end = nullptr;
    if (key == "dropout_rate") {
      const double v = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::runtime_error(
          "bench config line " + std::to_string(line_no) + ": bad value for dropout_rate");
      }
      cfg.dropout_rate = v;
      continue;
    }
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
      throw std::runtime_error(
        "bench config line " + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
    if (key == "prefix_depth") {
      cfg.prefix_depth = v;
    } else if (key == "prefix_width") {
      cfg.prefix_width = v;
    } else if (key == "head_depth") {
      cfg.head_depth = v;
    } else if (key == "head_width") {
      cfg.head_width = v;
    } else if (key == "samples") {
      cfg.samples = v;
    } else if (key == "trials") {
      cfg.trials = v;
    } else if (key == "seed") {
      cfg.seed = v;
    } else {
      throw std::runtime_error(
        "bench config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

void write_bench_csv(std::ostream & out, const BenchReport & report)
{
  const auto real = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "t_det_us,t_naive_us,t_cached_us,naive_over_det,cached_over_det,naive_over_cached,"
         "head_share,samples,trials,cache_bytes,maxrss_delta_kb\n";
  out << real(report.t_det_us) << ',' << real(report.t_naive_us) << ',' << real(report.t_cached_us)
      << ',' << real(report.naive_over_det) << ',' << real(report.cached_over_det) << ','
      << real(report.naive_over_cached) << ',' << real(report.head_share) << ',' << report.samples
      << ',' << report.trials << ',' << report.cache_bytes << ',' << report.maxrss_delta_kb
      << '\n';
}

}  // namespace probdet
