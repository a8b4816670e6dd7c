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

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "probdet/fusion.hpp"
#include "probdet/io.hpp"
#include "probdet/map_eval.hpp"
#include "probdet/mc_sampler.hpp"
#include "probdet/pdq.hpp"
#include "probdet/robustness.hpp"
#include "probdet/rng.hpp"
#include "probdet/synth.hpp"

namespace
{

std::ifstream open_input(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open input file " + path);
  }
  return in;
}

// Buffers the whole artifact first so a failure part-way never leaves a
// half-written output file behind.
void write_artifact(const std::string & path, const std::function<void(std::ostream &)> & produce)
{
  std::ostringstream buffer;
  produce(buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open output file " + path);
  }
  out << buffer.str();
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("failed writing output file " + path);
  }
}

std::pair<int, int> parse_frame_size(const std::string & text)
{
  const std::size_t x = text.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= text.size()) {
    throw CLI::ValidationError("--frame-size", "expected WxH, e.g. 640x480");
  }
  errno = 0;
  char * end = nullptr;
  const long w = std::strtol(text.c_str(), &end, 10);
  if (end != text.c_str() + x || errno == ERANGE) {
    throw CLI::ValidationError("--frame-size", "bad width in '" + text + "'");
  }
  const long h = std::strtol(text.c_str() + x + 1, &end, 10);
  if (*end != '\0' || errno == ERANGE) {
    throw CLI::ValidationError("--frame-size", "bad height in '" + text + "'");
  }
  if (w < 1 || h < 1) {
    throw CLI::ValidationError("--frame-size", "frame size must be positive");
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

std::string percent(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

probdet::SceneSpec parse_scene_spec(std::istream & in)
{
  probdet::SceneSpec spec;
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
    std::string extra;
    if (!(fields >> value) || (fields >> extra)) {
      throw std::runtime_error(
        "scene spec line " + std::to_string(line_no) + ": expected '<key> <value>'");
    }

    errno = 0;
    char * end = nullptr;
    const auto as_real = [&]() {
      const double v = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::runtime_error(
          "scene spec line " + std::to_string(line_no) + ": bad value for '" + key + "'");
      }
      return v;
    };
    const auto as_uint = [&]() {
      const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
      if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::runtime_error(
          "scene spec line " + std::to_string(line_no) + ": bad value for '" + key + "'");
      }
      return v;
    };
    const auto as_int = [&]() {
      const long v = std::strtol(value.c_str(), &end, 10);
      if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::runtime_error(
          "scene spec line " + std::to_string(line_no) + ": bad value for '" + key + "'");
      }
      return static_cast<int>(v);
    };

    if (key == "seed") {
      spec.seed = as_uint();
    } else if (key == "frame_width") {
      spec.frame_width = as_int();
    } else if (key == "frame_height") {
      spec.frame_height = as_int();
    } else if (key == "frames") {
      spec.frames = as_uint();
    } else if (key == "min_objects") {
      spec.min_objects = as_uint();
    } else if (key == "max_objects") {
      spec.max_objects = as_uint();
    } else if (key == "classes") {
      spec.classes = as_int();
    } else if (key == "sigma") {
      spec.sigma = as_real();
    } else if (key == "sigma_step") {
      spec.sigma_step = as_real();
    } else if (key == "confidence_noise") {
      spec.confidence_noise = as_real();
    } else if (key == "fp_rate") {
      spec.fp_rate = as_real();
    } else if (key == "fn_rate") {
      spec.fn_rate = as_real();
    } else if (key == "weak_rate") {
      spec.weak_rate = as_real();
    } else if (key == "weak_conf_lo") {
      spec.weak_conf_lo = as_real();
    } else if (key == "weak_conf_hi") {
      spec.weak_conf_hi = as_real();
    } else if (key == "fp_conf_lo") {
      spec.fp_conf_lo = as_real();
    } else if (key == "fp_conf_hi") {
      spec.fp_conf_hi = as_real();
    } else if (key == "samples") {
      spec.samples = as_uint();
    } else if (key == "min_box") {
      spec.min_box = as_int();
    } else if (key == "max_box") {
      spec.max_box = as_int();
    } else if (key == "margin") {
      spec.margin = as_int();
    } else {
      throw std::runtime_error(
        "scene spec line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

int run_fuse(
  const std::string & dump_path, const std::string & out_path, double conf, double iou_thr,
  const std::string & frame_size)
{
  const auto [width, height] = parse_frame_size(frame_size);
  std::ifstream in = open_input(dump_path);
  const probdet::RawDump dump = probdet::load_raw_dump(in);

  probdet::FilterConfig cfg;
  cfg.conf_threshold = conf;
  cfg.iou_threshold = iou_thr;
  cfg.frame_width = width;
  cfg.frame_height = height;

  std::size_t total_in = 0;
  std::size_t total_out = 0;
  std::vector<probdet::PrefusedFrame> fused;
  fused.reserve(dump.frames.size());
  for (const probdet::FrameSamples & fs : dump.frames) {
    probdet::PrefusedFrame frame;
    frame.frame_id = fs.frame_id;
    frame.detections = probdet::fuse_frame(fs.detections, cfg);
    total_in += fs.detections.size();
    total_out += frame.detections.size();
    fused.push_back(std::move(frame));
  }

  write_artifact(out_path, [&](std::ostream & out) {
    probdet::write_prefused_dump(out, fused, dump.classes);
  });
  std::cout << "input detections (D_O): " << total_in << "\n"
            << "fused detections (D_F): " << total_out << "\n"
            << "wrote " << out_path << "\n";
  return 0;
}

int run_evaluate(
  const std::string & gt_path, const std::string & dump_path, const std::string & out_path,
  double map_iou, unsigned threads)
{
  std::ifstream gt_in = open_input(gt_path);
  const std::vector<probdet::Frame> gt = probdet::load_ground_truth(gt_in);
  std::ifstream dump_in = open_input(dump_path);
  const probdet::PrefusedDump dump = probdet::load_prefused_dump(dump_in);

  const std::vector<probdet::Frame> frames = probdet::merge_for_evaluation(gt, dump);
  probdet::EvaluationOptions options;
  options.map_iou = map_iou;
  options.threads = threads;
  const probdet::EvaluationResult result = probdet::evaluate_dataset(frames, options);

  write_artifact(out_path, [&](std::ostream & out) { probdet::write_report(out, result); });
  std::cout << "PDQ: " << percent(result.report.pdq) << "\n"
            << "mAP@" << probdet::format_real(result.map_iou) << ": " << percent(result.map) << "\n"
            << "Lbl: " << percent(result.report.avg_label_q) << "\n"
            << "Sp: " << percent(result.report.avg_spatial_q) << "\n"
            << "TP/FP/FN: " << result.report.total_tp << "/" << result.report.total_fp << "/"
            << result.report.total_fn << "\n"
            << "wrote " << out_path << "\n";
  return 0;
}

int run_rpc(
  const std::string & grid_path, const std::string & reports_dir, const std::string & clean_path,
  const std::string & out_path)
{
  probdet::MetricSet clean;
  std::map<std::pair<std::string, int>, probdet::MetricSet> cells;
  std::vector<std::string> metric_order;

  if (!grid_path.empty()) {
    std::ifstream in = open_input(grid_path);
    probdet::GridTable table = probdet::parse_grid_csv(in);
    clean = std::move(table.clean);
    cells = std::move(table.cells);
    metric_order = std::move(table.metric_names);
  } else {
    const auto metrics_of = [](const probdet::EvaluationResult & r) {
      probdet::MetricSet m;
      m["pdq"] = r.report.pdq;
      m["map"] = r.map;
      m["avg_label_q"] = r.report.avg_label_q;
      m["avg_spatial_q"] = r.report.avg_spatial_q;
      return m;
    };
    std::ifstream clean_in = open_input(clean_path);
    clean = metrics_of(probdet::load_report(clean_in));

    for (const auto & entry : std::filesystem::directory_iterator(reports_dir)) {
      if (!entry.is_regular_file()) {
        continue;
      }
      const std::string name = entry.path().filename().string();
      // Report files are named <corruption>.s<severity>.report.
      if (name.size() < 9 || name.substr(name.size() - 7) != ".report") {
        continue;
      }
      const std::string stem = name.substr(0, name.size() - 7);
      const std::size_t dot = stem.rfind(".s");
      if (dot == std::string::npos || dot == 0 || dot + 2 >= stem.size()) {
        throw std::runtime_error(
          "report file '" + name + "' does not match <corruption>.s<severity>.report");
      }
      errno = 0;
      char * end = nullptr;
      const long severity = std::strtol(stem.c_str() + dot + 2, &end, 10);
      if (*end != '\0' || errno == ERANGE) {
        throw std::runtime_error("bad severity in report file name '" + name + "'");
      }
      std::ifstream report_in = open_input(entry.path().string());
      cells[{stem.substr(0, dot), static_cast<int>(severity)}] =
        metrics_of(probdet::load_report(report_in));
    }
    if (cells.empty()) {
      throw std::runtime_error("no <corruption>.s<severity>.report files found in " + reports_dir);
    }
    metric_order = {"pdq", "map", "avg_label_q", "avg_spatial_q"};
  }

  const std::map<std::string, std::optional<double>> result = probdet::rpc_suite(cells, clean);

  for (const std::string & metric : metric_order) {
    const std::optional<double> & value = result.at(metric);
    std::cout << "rPC_" << metric << ": " << (value ? percent(*value) : "undefined") << "\n";
  }
  if (!out_path.empty()) {
    write_artifact(out_path, [&](std::ostream & out) {
      out << "metric,rpc\n";
      for (const std::string & metric : metric_order) {
        const std::optional<double> & value = result.at(metric);
        out << metric << ',' << (value ? probdet::format_real(*value) : "") << '\n';
      }
    });
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int run_bench(const std::string & config_path, const std::string & out_path)
{
  std::ifstream in = open_input(config_path);
  const probdet::BenchConfig cfg = probdet::parse_bench_config(in);

  probdet::Rng rng(cfg.seed);
  const probdet::SplitPipeline pipeline = probdet::make_pipeline(cfg, rng);
  const probdet::Tensor input = probdet::make_input(cfg, rng);
  const probdet::BenchReport report = probdet::bench(pipeline, input, cfg);

  write_artifact(out_path, [&](std::ostream & out) { probdet::write_bench_csv(out, report); });
  std::printf("t_det: %.1f us  t_naive: %.1f us  t_cached: %.1f us\n", report.t_det_us,
              report.t_naive_us, report.t_cached_us);
  std::printf("naive/det: %.2f  cached/det: %.2f  naive/cached: %.2f  head_share: %.4f\n",
              report.naive_over_det, report.cached_over_det, report.naive_over_cached,
              report.head_share);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_synth(
  const std::string & spec_path, const std::string & gt_path, const std::string & dump_path,
  unsigned ladder)
{
  std::ifstream in = open_input(spec_path);
  probdet::SceneSpec spec = parse_scene_spec(in);
  if (const char * env_seed = std::getenv("PROBDET_SEED")) {
    errno = 0;
    char * end = nullptr;
    const unsigned long long v = std::strtoull(env_seed, &end, 10);
    if (end == env_seed || *end != '\0' || errno == ERANGE) {
      throw std::runtime_error("PROBDET_SEED must be an unsigned integer");
    }
    spec.seed = v;
  }

  if (ladder == 0) {
    const probdet::SyntheticScene scene = probdet::generate(spec);
    write_artifact(gt_path, [&](std::ostream & out) {
      probdet::write_ground_truth(out, scene.ground_truth);
    });
    write_artifact(dump_path, [&](std::ostream & out) {
      probdet::write_raw_dump(out, scene.dump, spec.classes, spec.samples);
    });
    std::cout << "wrote " << gt_path << " (" << scene.ground_truth.size() << " frames)\n"
              << "wrote " << dump_path << "\n";
    return 0;
  }

  const probdet::SeverityLadder result = probdet::severity_ladder(spec, ladder);
  write_artifact(gt_path, [&](std::ostream & out) {
    probdet::write_ground_truth(out, result.ground_truth);
  });
  std::cout << "wrote " << gt_path << " (" << result.ground_truth.size() << " frames)\n";
  for (std::size_t level = 0; level < result.dumps.size(); ++level) {
    const std::string path = dump_path + ".s" + std::to_string(level);
    write_artifact(path, [&](std::ostream & out) {
      probdet::write_raw_dump(out, result.dumps[level], spec.classes, spec.samples);
    });
    std::cout << "wrote " << path << " (sigma " << probdet::format_real(result.sigmas[level])
              << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Probabilistic object-detection post-processing toolkit"};
  app.require_subcommand(1);

  std::string fuse_dump;
  std::string fuse_out;
  double fuse_conf = 0.5;
  double fuse_iou = 0.6;
  std::string fuse_frame_size;
  CLI::App * fuse = app.add_subcommand("fuse", "Average, filter, and fuse raw detection samples");
  fuse->add_option("--dump", fuse_dump, "raw-sample detection dump")->required();
  fuse->add_option("--out", fuse_out, "output prefused dump")->required();
  fuse->add_option("--conf", fuse_conf, "confidence threshold")
    ->required()
    ->check(CLI::Range(0.0, 1.0));
  fuse->add_option("--iou", fuse_iou, "suppression IoU threshold")->check(CLI::Range(0.0, 1.0));
  fuse->add_option("--frame-size", fuse_frame_size, "frame size WxH")->required();

  std::string eval_gt;
  std::string eval_dump;
  std::string eval_out;
  double eval_map_iou = 0.5;
  unsigned eval_threads = 0;
  CLI::App * evaluate = app.add_subcommand("evaluate", "Score a prefused dump against ground truth");
  evaluate->add_option("--gt", eval_gt, "ground-truth file")->required();
  evaluate->add_option("--dump", eval_dump, "prefused detection dump")->required();
  evaluate->add_option("--out", eval_out, "output report")->required();
  evaluate->add_option("--map-iou", eval_map_iou, "IoU threshold for mAP")
    ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--threads", eval_threads, "worker threads (0 = all cores)");

  std::string rpc_grid;
  std::string rpc_reports;
  std::string rpc_clean;
  std::string rpc_out;
  CLI::App * rpc_cmd = app.add_subcommand("rpc", "Aggregate a corruption grid into rPC scores");
  CLI::Option * grid_opt = rpc_cmd->add_option("--grid", rpc_grid, "metric grid CSV");
  CLI::Option * reports_opt =
    rpc_cmd->add_option("--reports", rpc_reports, "directory of <corruption>.s<severity>.report files");
  CLI::Option * clean_opt = rpc_cmd->add_option("--clean", rpc_clean, "clean-data report");
  rpc_cmd->add_option("--out", rpc_out, "output CSV");
  grid_opt->excludes(reports_opt);
  reports_opt->needs(clean_opt);

  std::string bench_config;
  std::string bench_out;
  CLI::App * bench = app.add_subcommand("bench-sampler", "Time cached vs naive MC-Dropout sampling");
  bench->add_option("--config", bench_config, "benchmark config file")->required();
  bench->add_option("--out", bench_out, "output CSV")->required();

  std::string synth_spec;
  std::string synth_gt;
  std::string synth_dump;
  unsigned synth_ladder = 0;
  CLI::App * synth = app.add_subcommand("synth", "Generate a synthetic scene and detection dump");
  synth->add_option("--spec", synth_spec, "scene spec file")->required();
  synth->add_option("--out-gt", synth_gt, "output ground-truth file")->required();
  synth->add_option("--out-dump", synth_dump, "output raw dump (ladder levels get .s<k> suffixes)")
    ->required();
  synth->add_option("--ladder", synth_ladder, "extra severity levels beyond the clean dump");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fuse->parsed()) {
      return run_fuse(fuse_dump, fuse_out, fuse_conf, fuse_iou, fuse_frame_size);
    }
    if (evaluate->parsed()) {
      return run_evaluate(eval_gt, eval_dump, eval_out, eval_map_iou, eval_threads);
    }
    if (rpc_cmd->parsed()) {
      if (rpc_grid.empty() && (rpc_reports.empty() || rpc_clean.empty())) {
        std::cerr << "error: rpc needs either --grid or --reports with --clean\n";
        return 1;
      }
      return run_rpc(rpc_grid, rpc_reports, rpc_clean, rpc_out);
    }
    if (bench->parsed()) {
      return run_bench(bench_config, bench_out);
    }
    if (synth->parsed()) {
      return run_synth(synth_spec, synth_gt, synth_dump, synth_ladder);
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
