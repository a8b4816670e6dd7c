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

#ifndef PROBDET_IO_HPP_
#define PROBDET_IO_HPP_

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "probdet/geometry.hpp"
#include "probdet/pdq.hpp"
#include "probdet/synth.hpp"

namespace probdet
{

// Parse failure with the 1-based line number it was detected on.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, const std::string & msg)
  : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line)
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Serializes a double with 17 significant digits, enough to round-trip
// exactly through the text formats.
std::string format_real(double v);

// Ground-truth file (`probdet-gt v1`): per-frame object lists with integer
// class ids, real corner boxes, and masks given either as `box` (all pixels
// of the bbox) or as an explicit per-row run-length encoding.
std::vector<Frame> load_ground_truth(std::istream & in);
void write_ground_truth(std::ostream & out, const std::vector<Frame> & frames);

// Detection dump, raw shape (`probdet-dump v1 raw C N`): every detection
// slot carries exactly N center-form samples with C class scores.
struct RawDump
{
  int classes = 0;
  std::size_t samples = 0;
  std::vector<FrameSamples> frames;
};

RawDump load_raw_dump(std::istream & in);
void write_raw_dump(
  std::ostream & out, const std::vector<FrameSamples> & frames, int classes, std::size_t samples);

// Detection dump, prefused shape (`probdet-dump v1 prefused C`): corner-form
// boxes with per-corner covariances and C label probabilities.
struct PrefusedFrame
{
  std::string frame_id;
  std::vector<ProbBox> detections;
};

struct PrefusedDump
{
  int classes = 0;
  std::vector<PrefusedFrame> frames;
};

PrefusedDump load_prefused_dump(std::istream & in);
void write_prefused_dump(std::ostream & out, const std::vector<PrefusedFrame> & frames, int classes);

// Shape of a dump file, decided by its header line alone.
enum class DumpKind
{
  raw,
  prefused,
};

DumpKind peek_dump_kind(std::istream & in);

// Joins ground truth with a prefused dump into evaluable frames. Dump
// frames missing from the ground truth are an error (all offenders listed);
// ground-truth frames without dump entries evaluate with zero detections.
std::vector<Frame> merge_for_evaluation(
  const std::vector<Frame> & gt_frames, const PrefusedDump & dump);

// Evaluation report (`probdet-report v1`): metrics at full precision,
// totals, and per-frame tallies with one line per recorded pair.
void write_report(std::ostream & out, const EvaluationResult & result);
EvaluationResult load_report(std::istream & in);

}  // namespace probdet

#endif  // PROBDET_IO_HPP_
