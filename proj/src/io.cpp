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

#include "probdet/io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace probdet
{
namespace
{

bool read_tokens(std::istream & in, std::size_t & line_no, std::vector<std::string> & out)
{
  std::string line;
  if (!std::getline(in, line)) {
    return false;
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  out.clear();
  std::istringstream fields(line);
  std::string tok;
  while (fields >> tok) {
    out.push_back(tok);
  }
  return true;
}

void expect(bool condition, std::size_t line, const std::string & msg)
{
  if (!condition) {
    throw ParseError(line, msg);
  }
}

double parse_real(const std::string & tok, std::size_t line)
{
  errno = 0;
  char * end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  expect(
    end != tok.c_str() && *end == '\0' && errno != ERANGE && std::isfinite(v), line,
    "bad numeric value '" + tok + "'");
  return v;
}

long long parse_integer(const std::string & tok, std::size_t line)
{
  errno = 0;
  char * end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  expect(
    end != tok.c_str() && *end == '\0' && errno != ERANGE, line, "bad integer '" + tok + "'");
  return v;
}

std::size_t parse_count(const std::string & tok, std::size_t line, const char * what)
{
  const long long v = parse_integer(tok, line);
  expect(v >= 0, line, std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

double parse_probability(const std::string & tok, std::size_t line, const char * what)
{
  const double v = parse_real(tok, line);
  expect(v >= 0.0 && v <= 1.0, line, std::string(what) + " must be in [0, 1]");
  return v;
}

void require_plain_id(const std::string & id)
{
  if (id.empty() || id.find_first_of(" \t\r\n") != std::string::npos) {
    throw std::invalid_argument("frame id must be a non-empty whitespace-free token");
  }
}

// Canonical per-row run-length encoding of a pixel mask (sorted by y, then
// x). Throws std::invalid_argument on duplicate pixels.
std::vector<std::array<long, 3>> encode_rle(std::vector<PixelCoord> mask)
{
  std::sort(mask.begin(), mask.end(), [](const PixelCoord & a, const PixelCoord & b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  std::vector<std::array<long, 3>> runs;
  for (std::size_t i = 0; i < mask.size();) {
    const long y = mask[i].y;
    const long x = mask[i].x;
    long len = 1;
    while (i + static_cast<std::size_t>(len) < mask.size() &&
           mask[i + static_cast<std::size_t>(len)].y == y &&
           mask[i + static_cast<std::size_t>(len)].x == x + len) {
      ++len;
    }
    if (i + static_cast<std::size_t>(len) < mask.size()) {
      const PixelCoord & next = mask[i + static_cast<std::size_t>(len)];
      if (next.y == y && next.x == x + len - 1) {
        throw std::invalid_argument("mask contains duplicate pixels");
      }
    }
    runs.push_back({y, x, len});
    i += static_cast<std::size_t>(len);
  }
  return runs;
}

std::array<long, 3> parse_rle_triple(const std::string & tok, std::size_t line)
{
  const std::size_t c1 = tok.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : tok.find(':', c1 + 1);
  expect(
    c1 != std::string::npos && c2 != std::string::npos && tok.find(':', c2 + 1) == std::string::npos,
    line, "bad RLE triple '" + tok + "', expected y:x:len");
  const long long y = parse_integer(tok.substr(0, c1), line);
  const long long x = parse_integer(tok.substr(c1 + 1, c2 - c1 - 1), line);
  const long long len = parse_integer(tok.substr(c2 + 1), line);
  return {static_cast<long>(y), static_cast<long>(x), static_cast<long>(len)};
}

}  // namespace

std::string format_real(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<Frame> load_ground_truth(std::istream & in)
{
  std::size_t line_no = 0;
  std::vector<std::string> tok;

  expect(read_tokens(in, line_no, tok), 1, "empty file, expected 'probdet-gt v1' header");
  expect(
    tok.size() == 2 && tok[0] == "probdet-gt" && tok[1] == "v1", line_no,
    "expected 'probdet-gt v1' header");

  std::vector<Frame> frames;
  std::set<std::string> seen_ids;
  while (read_tokens(in, line_no, tok)) {
    expect(!tok.empty(), line_no, "blank line inside ground-truth file");
    expect(
      tok[0] == "frame" && tok.size() == 5, line_no, "expected 'frame <id> <W> <H> <count>'");
    Frame frame;
    frame.frame_id = tok[1];
    expect(seen_ids.insert(frame.frame_id).second, line_no, "duplicate frame id " + frame.frame_id);
    const long long w = parse_integer(tok[2], line_no);
    const long long h = parse_integer(tok[3], line_no);
    expect(w >= 1 && h >= 1, line_no, "frame size must be positive");
    frame.width = static_cast<int>(w);
    frame.height = static_cast<int>(h);
    const std::size_t count = parse_count(tok[4], line_no, "object count");

    for (std::size_t o = 0; o < count; ++o) {
      expect(read_tokens(in, line_no, tok), line_no + 1, "missing object record");
      expect(
        tok.size() >= 7 && tok[0] == "object", line_no,
        "expected 'object <class> <x1> <y1> <x2> <y2> box|rle ...'");
      GroundTruthObject gt;
      const long long class_id = parse_integer(tok[1], line_no);
      expect(class_id >= 0, line_no, "class id must be non-negative");
      gt.class_id = static_cast<int>(class_id);
      const double x1 = parse_real(tok[2], line_no);
      const double y1 = parse_real(tok[3], line_no);
      const double x2 = parse_real(tok[4], line_no);
      const double y2 = parse_real(tok[5], line_no);
      expect(x1 < x2 && y1 < y2, line_no, "bbox corners must satisfy x1 < x2 and y1 < y2");
      expect(
        x1 >= 0.0 && y1 >= 0.0 && x2 <= static_cast<double>(frame.width) &&
          y2 <= static_cast<double>(frame.height),
        line_no, "bbox must lie inside the frame");
      gt.bbox = Box{Corner{x1, y1}, Corner{x2, y2}};

      if (tok[6] == "box") {
        expect(tok.size() == 7, line_no, "'box' mask takes no further fields");
        gt.mask = box_pixels(gt.bbox, frame.width, frame.height);
        expect(!gt.mask.empty(), line_no, "bbox covers no pixel centers, mask would be empty");
      } else if (tok[6] == "rle") {
        expect(tok.size() >= 8, line_no, "'rle' mask needs a run count");
        const std::size_t runs = parse_count(tok[7], line_no, "run count");
        expect(runs >= 1, line_no, "RLE mask must have at least one run");
        expect(tok.size() == 8 + runs, line_no, "run count does not match the triples present");
        long prev_y = -1;
        long prev_end = -1;
        for (std::size_t r = 0; r < runs; ++r) {
          const std::array<long, 3> run = parse_rle_triple(tok[8 + r], line_no);
          expect(run[0] >= 0 && run[0] < frame.height, line_no, "RLE row outside frame");
          expect(run[2] >= 1, line_no, "RLE run length must be positive");
          expect(
            run[1] >= 0 && run[1] + run[2] <= frame.width, line_no, "RLE run outside frame");
          expect(
            run[0] > prev_y || (run[0] == prev_y && run[1] >= prev_end), line_no,
            "RLE runs must be sorted by row then column and non-overlapping");
          for (long x = run[1]; x < run[1] + run[2]; ++x) {
            gt.mask.push_back(PixelCoord{static_cast<int>(x), static_cast<int>(run[0])});
          }
          prev_y = run[0];
          prev_end = run[1] + run[2];
        }
      } else {
        throw ParseError(line_no, "mask kind must be 'box' or 'rle'");
      }
      frame.ground_truths.push_back(std::move(gt));
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

void write_ground_truth(std::ostream & out, const std::vector<Frame> & frames)
{
  out << "probdet-gt v1\n";
  for (const Frame & frame : frames) {
    require_plain_id(frame.frame_id);
    out << "frame " << frame.frame_id << ' ' << frame.width << ' ' << frame.height << ' '
        << frame.ground_truths.size() << '\n';
    for (const GroundTruthObject & gt : frame.ground_truths) {
      if (gt.mask.empty()) {
        throw std::invalid_argument(
          "write_ground_truth: object in frame " + frame.frame_id + " has an empty mask");
      }
      out << "object " << gt.class_id << ' ' << format_real(gt.bbox.tl.x) << ' '
          << format_real(gt.bbox.tl.y) << ' ' << format_real(gt.bbox.br.x) << ' '
          << format_real(gt.bbox.br.y);
      const std::vector<PixelCoord> box_mask = box_pixels(gt.bbox, frame.width, frame.height);
      if (gt.mask == box_mask) {
        out << " box\n";
      } else {
        const std::vector<std::array<long, 3>> runs = encode_rle(gt.mask);
        out << " rle " << runs.size();
        for (const std::array<long, 3> & run : runs) {
          out << ' ' << run[0] << ':' << run[1] << ':' << run[2];
        }
        out << '\n';
      }
    }
  }
}

RawDump load_raw_dump(std::istream & in)
{
  std::size_t line_no = 0;
  std::vector<std::string> tok;

  expect(read_tokens(in, line_no, tok), 1, "empty file, expected 'probdet-dump v1 ...' header");
  expect(
    tok.size() >= 3 && tok[0] == "probdet-dump" && tok[1] == "v1", line_no,
    "expected 'probdet-dump v1 raw <C> <N>' header");
  expect(tok[2] != "prefused", line_no, "dump is prefused-shape, expected raw samples");
  expect(tok[2] == "raw" && tok.size() == 5, line_no, "expected 'probdet-dump v1 raw <C> <N>'");

  RawDump dump;
  const std::size_t classes = parse_count(tok[3], line_no, "class count");
  dump.samples = parse_count(tok[4], line_no, "sample count");
  expect(classes >= 1, line_no, "class count must be at least 1");
  expect(dump.samples >= 1, line_no, "sample count must be at least 1");
  dump.classes = static_cast<int>(classes);

  std::set<std::string> seen_ids;
  while (read_tokens(in, line_no, tok)) {
    expect(
      tok.size() == 3 && tok[0] == "frame", line_no, "expected 'frame <id> <detection count>'");
    FrameSamples fs;
    fs.frame_id = tok[1];
    expect(seen_ids.insert(fs.frame_id).second, line_no, "duplicate frame id " + fs.frame_id);
    const std::size_t count = parse_count(tok[2], line_no, "detection count");
    for (std::size_t d = 0; d < count; ++d) {
      expect(read_tokens(in, line_no, tok), line_no + 1, "missing 'det' record");
      expect(tok.size() == 1 && tok[0] == "det", line_no, "expected 'det'");
      SampleSet set;
      for (std::size_t s = 0; s < dump.samples; ++s) {
        expect(read_tokens(in, line_no, tok), line_no + 1, "missing sample line");
        expect(
          tok.size() == 6 + classes && tok[0] == "sample", line_no,
          "expected 'sample <cx> <cy> <w> <h> <obj> <" + std::to_string(classes) +
            " class scores>'");
        RawBox sample;
        sample.cx = parse_real(tok[1], line_no);
        sample.cy = parse_real(tok[2], line_no);
        sample.width = parse_real(tok[3], line_no);
        sample.height = parse_real(tok[4], line_no);
        sample.objectness = parse_probability(tok[5], line_no, "objectness");
        sample.class_scores.reserve(classes);
        for (std::size_t c = 0; c < classes; ++c) {
          sample.class_scores.push_back(parse_probability(tok[6 + c], line_no, "class score"));
        }
        set.samples.push_back(std::move(sample));
      }
      fs.detections.push_back(std::move(set));
    }
    dump.frames.push_back(std::move(fs));
  }
  return dump;
}

void write_raw_dump(
  std::ostream & out, const std::vector<FrameSamples> & frames, int classes, std::size_t samples)
{
  if (classes < 1 || samples < 1) {
    throw std::invalid_argument("write_raw_dump: classes and samples must be at least 1");
  }
  out << "probdet-dump v1 raw " << classes << ' ' << samples << '\n';
  for (const FrameSamples & fs : frames) {
    require_plain_id(fs.frame_id);
    out << "frame " << fs.frame_id << ' ' << fs.detections.size() << '\n';
    for (const SampleSet & set : fs.detections) {
      if (set.samples.size() != samples) {
        throw std::invalid_argument(
          "write_raw_dump: detection in frame " + fs.frame_id + " has " +
          std::to_string(set.samples.size()) + " samples, expected " + std::to_string(samples));
      }
      out << "det\n";
      for (const RawBox & b : set.samples) {
        if (b.class_scores.size() != static_cast<std::size_t>(classes)) {
          throw std::invalid_argument(
            "write_raw_dump: sample in frame " + fs.frame_id + " has " +
            std::to_string(b.class_scores.size()) + " class scores, expected " +
            std::to_string(classes));
        }
        out << "sample " << format_real(b.cx) << ' ' << format_real(b.cy) << ' '
            << format_real(b.width) << ' ' << format_real(b.height) << ' '
            << format_real(b.objectness);
        for (double score : b.class_scores) {
          out << ' ' << format_real(score);
        }
        out << '\n';
      }
    }
  }
}

PrefusedDump load_prefused_dump(std::istream & in)
{
  std::size_t line_no = 0;
  std::vector<std::string> tok;

  expect(read_tokens(in, line_no, tok), 1, "empty file, expected 'probdet-dump v1 ...' header");
  expect(
    tok.size() >= 3 && tok[0] == "probdet-dump" && tok[1] == "v1", line_no,
    "expected 'probdet-dump v1 prefused <C>' header");
  expect(tok[2] != "raw", line_no, "dump is raw-shape, expected prefused boxes");
  expect(tok[2] == "prefused" && tok.size() == 4, line_no, "expected 'probdet-dump v1 prefused <C>'");

  PrefusedDump dump;
  const std::size_t classes = parse_count(tok[3], line_no, "class count");
  expect(classes >= 1, line_no, "class count must be at least 1");
  dump.classes = static_cast<int>(classes);

  std::set<std::string> seen_ids;
  while (read_tokens(in, line_no, tok)) {
    expect(
      tok.size() == 3 && tok[0] == "frame", line_no, "expected 'frame <id> <detection count>'");
    PrefusedFrame frame;
    frame.frame_id = tok[1];
    expect(seen_ids.insert(frame.frame_id).second, line_no, "duplicate frame id " + frame.frame_id);
    const std::size_t count = parse_count(tok[2], line_no, "detection count");
    for (std::size_t d = 0; d < count; ++d) {
      expect(read_tokens(in, line_no, tok), line_no + 1, "missing 'pbox' record");
      expect(
        tok.size() == 11 + classes && tok[0] == "pbox", line_no,
        "expected 'pbox <x1> <y1> <x2> <y2> <6 covariance entries> <" + std::to_string(classes) +
          " label probs>'");
      ProbBox det;
      det.tl = Corner{parse_real(tok[1], line_no), parse_real(tok[2], line_no)};
      det.br = Corner{parse_real(tok[3], line_no), parse_real(tok[4], line_no)};
      det.cov_tl =
        CovMatrix2{parse_real(tok[5], line_no), parse_real(tok[6], line_no), parse_real(tok[7], line_no)};
      det.cov_br =
        CovMatrix2{parse_real(tok[8], line_no), parse_real(tok[9], line_no), parse_real(tok[10], line_no)};
      det.label_probs.reserve(classes);
      for (std::size_t c = 0; c < classes; ++c) {
        det.label_probs.push_back(parse_probability(tok[11 + c], line_no, "label probability"));
      }
      frame.detections.push_back(std::move(det));
    }
    dump.frames.push_back(std::move(frame));
  }
  return dump;
}

void write_prefused_dump(std::ostream & out, const std::vector<PrefusedFrame> & frames, int classes)
{
  if (classes < 1) {
    throw std::invalid_argument("write_prefused_dump: classes must be at least 1");
  }
  out << "probdet-dump v1 prefused " << classes << '\n';
  for (const PrefusedFrame & frame : frames) {
    require_plain_id(frame.frame_id);
    out << "frame " << frame.frame_id << ' ' << frame.detections.size() << '\n';
    for (const ProbBox & det : frame.detections) {
      if (det.label_probs.size() != static_cast<std::size_t>(classes)) {
        throw std::invalid_argument(
          "write_prefused_dump: detection in frame " + frame.frame_id + " has " +
          std::to_string(det.label_probs.size()) + " label probabilities, expected " +
          std::to_string(classes));
      }
      out << "pbox " << format_real(det.tl.x) << ' ' << format_real(det.tl.y) << ' '
          << format_real(det.br.x) << ' ' << format_real(det.br.y) << ' '
          << format_real(det.cov_tl.xx) << ' ' << format_real(det.cov_tl.xy) << ' '
          << format_real(det.cov_tl.yy) << ' ' << format_real(det.cov_br.xx) << ' '
          << format_real(det.cov_br.xy) << ' ' << format_real(det.cov_br.yy);
      for (double p : det.label_probs) {
        out << ' ' << format_real(p);
      }
      out << '\n';
    }
  }
}

DumpKind peek_dump_kind(std::istream & in)
{
  std::size_t line_no = 0;
  std::vector<std::string> tok;
  expect(read_tokens(in, line_no, tok), 1, "empty file, expected 'probdet-dump v1 ...' header");
  expect(
    tok.size() >= 3 && tok[0] == "probdet-dump" && tok[1] == "v1", line_no,
    "expected 'probdet-dump v1 ...' header");
  if (tok[2] == "raw") {
    return DumpKind::raw;
  }
  if (tok[2] == "prefused") {
    return DumpKind::prefused;
  }
  throw ParseError(line_no, "dump shape must be 'raw' or 'prefused'");
}

std::vector<Frame> merge_for_evaluation(
  const std::vector<Frame> & gt_frames, const PrefusedDump & dump)
{
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < gt_frames.size(); ++i) {
    index_of[gt_frames[i].frame_id] = i;
  }

  std::vector<Frame> merged = gt_frames;
  std::string missing;
  for (const PrefusedFrame & frame : dump.frames) {
    const auto it = index_of.find(frame.frame_id);
    if (it == index_of.end()) {
      if (!missing.empty()) {
        missing += ", ";
      }
      missing += frame.frame_id;
      continue;
    }
    merged[it->second].detections = frame.detections;
  }
  if (!missing.empty()) {
    throw std::runtime_error("dump frames missing from ground truth: " + missing);
  }

  for (const Frame & frame : merged) {
    for (const GroundTruthObject & gt : frame.ground_truths) {
      if (gt.class_id >= dump.classes) {
        throw std::runtime_error(
          "ground-truth class " + std::to_string(gt.class_id) + " in frame " + frame.frame_id +
          " exceeds the dump's class count " + std::to_string(dump.classes));
      }
    }
  }
  return merged;
}

void write_report(std::ostream & out, const EvaluationResult & result)
{
  const EvalReport & report = result.report;
  if (result.frame_ids.size() != report.frame_tallies.size()) {
    throw std::invalid_argument("write_report: frame id list does not match the tallies");
  }
  out << "probdet-report v1\n";
  out << "meta map_iou " << format_real(result.map_iou) << '\n';
  out << "meta lbl_sp_average tp_only\n";
  out << "metric pdq " << format_real(report.pdq) << '\n';
  out << "metric map " << format_real(result.map) << '\n';
  out << "metric avg_label_q " << format_real(report.avg_label_q) << '\n';
  out << "metric avg_spatial_q " << format_real(report.avg_spatial_q) << '\n';
  out << "totals " << report.total_tp << ' ' << report.total_fp << ' ' << report.total_fn << '\n';
  out << "frames " << report.frame_tallies.size() << '\n';
  for (std::size_t f = 0; f < report.frame_tallies.size(); ++f) {
    const FrameTally & tally = report.frame_tallies[f];
    require_plain_id(result.frame_ids[f]);
    if (tally.ppdq_values.size() != tally.tp || tally.label_values.size() != tally.tp ||
        tally.spatial_values.size() != tally.tp) {
      throw std::invalid_argument("write_report: tally value vectors must have one entry per TP");
    }
    out << "frame " << result.frame_ids[f] << ' ' << tally.tp << ' ' << tally.fp << ' '
        << tally.fn << ' ' << tally.tp << '\n';
    for (std::size_t p = 0; p < tally.tp; ++p) {
      out << "pair " << format_real(tally.ppdq_values[p]) << ' '
          << format_real(tally.label_values[p]) << ' ' << format_real(tally.spatial_values[p])
          << '\n';
    }
  }
}

EvaluationResult load_report(std::istream & in)
{
  std::size_t line_no = 0;
  std::vector<std::string> tok;

  expect(read_tokens(in, line_no, tok), 1, "empty file, expected 'probdet-report v1' header");
  expect(
    tok.size() == 2 && tok[0] == "probdet-report" && tok[1] == "v1", line_no,
    "expected 'probdet-report v1' header");

  EvaluationResult result;

  expect(read_tokens(in, line_no, tok), line_no + 1, "missing 'meta map_iou' line");
  expect(tok.size() == 3 && tok[0] == "meta" && tok[1] == "map_iou", line_no, "expected 'meta map_iou <v>'");
  result.map_iou = parse_real(tok[2], line_no);

  expect(read_tokens(in, line_no, tok), line_no + 1, "missing 'meta lbl_sp_average' line");
  expect(
    tok.size() == 3 && tok[0] == "meta" && tok[1] == "lbl_sp_average" && tok[2] == "tp_only",
    line_no, "expected 'meta lbl_sp_average tp_only'");

  const auto read_metric = [&](const char * name) {
    expect(read_tokens(in, line_no, tok), line_no + 1, std::string("missing 'metric ") + name + "' line");
    expect(
      tok.size() == 3 && tok[0] == "metric" && tok[1] == name, line_no,
      std::string("expected 'metric ") + name + " <v>'");
    return parse_real(tok[2], line_no);
  };
  result.report.pdq = read_metric("pdq");
  result.map = read_metric("map");
  result.report.avg_label_q = read_metric("avg_label_q");
  result.report.avg_spatial_q = read_metric("avg_spatial_q");

  expect(read_tokens(in, line_no, tok), line_no + 1, "missing 'totals' line");
  expect(tok.size() == 4 && tok[0] == "totals", line_no, "expected 'totals <tp> <fp> <fn>'");
  result.report.total_tp = parse_count(tok[1], line_no, "tp total");
  result.report.total_fp = parse_count(tok[2], line_no, "fp total");
  result.report.total_fn = parse_count(tok[3], line_no, "fn total");

  expect(read_tokens(in, line_no, tok), line_no + 1, "missing 'frames' line");
  expect(tok.size() == 2 && tok[0] == "frames", line_no, "expected 'frames <count>'");
  const std::size_t frame_count = parse_count(tok[1], line_no, "frame count");

  std::set<std::string> seen_ids;
  for (std::size_t f = 0; f < frame_count; ++f) {
    expect(read_tokens(in, line_no, tok), line_no + 1, "missing frame tally line");
    expect(
      tok.size() == 6 && tok[0] == "frame", line_no,
      "expected 'frame <id> <tp> <fp> <fn> <pairs>'");
    expect(seen_ids.insert(tok[1]).second, line_no, "duplicate frame id " + tok[1]);
    result.frame_ids.push_back(tok[1]);
    FrameTally tally;
    tally.tp = parse_count(tok[2], line_no, "tp");
    tally.fp = parse_count(tok[3], line_no, "fp");
    tally.fn = parse_count(tok[4], line_no, "fn");
    const std::size_t pairs = parse_count(tok[5], line_no, "pair count");
    expect(pairs == tally.tp, line_no, "pair count must equal the TP count");
    for (std::size_t p = 0; p < pairs; ++p) {
      expect(read_tokens(in, line_no, tok), line_no + 1, "missing pair line");
      expect(
        tok.size() == 4 && tok[0] == "pair", line_no,
        "expected 'pair <ppdq> <label_q> <spatial_q>'");
      tally.ppdq_values.push_back(parse_real(tok[1], line_no));
      tally.label_values.push_back(parse_real(tok[2], line_no));
      tally.spatial_values.push_back(parse_real(tok[3], line_no));
    }
    result.report.frame_tallies.push_back(std::move(tally));
  }
  expect(!read_tokens(in, line_no, tok), line_no + 1, "unexpected content after the last frame");
  return result;
}

}  // namespace probdet
