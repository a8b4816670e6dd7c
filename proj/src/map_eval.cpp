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

#include "probdet/map_eval.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace probdet
{

Detection2D to_detection(const ProbBox & det)
{
  Detection2D out;
  out.box = det.box();
  out.class_id = 0;
  out.confidence = 0.0;
  for (std::size_t c = 0; c < det.label_probs.size(); ++c) {
    if (det.label_probs[c] > out.confidence) {
      out.confidence = det.label_probs[c];
      out.class_id = static_cast<int>(c);
    }
  }
  return out;
}

double average_precision(
  std::vector<ApDetection> dets, const std::vector<ApGroundTruth> & gts, double iou_thr)
{
  const std::size_t num_gt = gts.size();
  if (num_gt == 0) {
    return 0.0;
  }

  std::map<std::size_t, std::vector<std::size_t>> gts_by_frame;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    gts_by_frame[gts[g].frame].push_back(g);
  }

  std::stable_sort(dets.begin(), dets.end(), [](const ApDetection & a, const ApDetection & b) {
    return a.confidence > b.confidence;
  });

  std::vector<char> gt_matched(num_gt, 0);
  std::vector<double> recalls;
  std::vector<double> precisions;
  recalls.reserve(dets.size());
  precisions.reserve(dets.size());

  std::size_t tp = 0;
  std::size_t seen = 0;
  for (const ApDetection & det : dets) {
    ++seen;
    double best_iou = 0.0;
    std::size_t best_gt = num_gt;
    const auto it = gts_by_frame.find(det.frame);
    if (it != gts_by_frame.end()) {
      for (std::size_t g : it->second) {
        if (gt_matched[g]) {
          continue;
        }
        const double overlap = iou(det.box, gts[g].box);
        if (overlap >= iou_thr && overlap > best_iou) {
          best_iou = overlap;
          best_gt = g;
        }
      }
    }
    if (best_gt < num_gt) {
      gt_matched[best_gt] = 1;
      ++tp;
    }
    recalls.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    precisions.push_back(static_cast<double>(tp) / static_cast<double>(seen));
  }

  // Precision envelope: env[k] = max precision at recall >= recalls[k].
  std::vector<double> env(precisions.size());
  double running = 0.0;
  for (std::size_t k = precisions.size(); k-- > 0;) {
    running = std::max(running, precisions[k]);
    env[k] = running;
  }

  double total = 0.0;
  for (int level = 0; level <= 100; ++level) {
    const double r = static_cast<double>(level) / 100.0;
    const auto pos = std::lower_bound(recalls.begin(), recalls.end(), r);
    if (pos != recalls.end()) {
      total += env[static_cast<std::size_t>(pos - recalls.begin())];
    }
  }
  return total / 101.0;
}

double mean_ap(const std::vector<const Frame *> & frames, double iou_thr)
{
  std::map<int, std::vector<ApGroundTruth>> gts_by_class;
  std::map<int, std::vector<ApDetection>> dets_by_class;

  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const GroundTruthObject & gt : frames[f]->ground_truths) {
      gts_by_class[gt.class_id].push_back(ApGroundTruth{f, gt.bbox});
    }
    for (const ProbBox & det : frames[f]->detections) {
      const Detection2D point = to_detection(det);
      dets_by_class[point.class_id].push_back(ApDetection{f, point.box, point.confidence});
    }
  }

  if (gts_by_class.empty()) {
    return 0.0;
  }

  double total = 0.0;
  for (const auto & [class_id, gts] : gts_by_class) {
    const auto it = dets_by_class.find(class_id);
    std::vector<ApDetection> dets = it == dets_by_class.end() ? std::vector<ApDetection>{} : it->second;
    total += average_precision(std::move(dets), gts, iou_thr);
  }
  return total / static_cast<double>(gts_by_class.size());
}

double mean_ap(const std::vector<Frame> & frames, double iou_thr)
{
  std::vector<const Frame *> view;
  view.reserve(frames.size());
  for (const Frame & f : frames) {
    view.push_back(&f);
  }
  return mean_ap(view, iou_thr);
}

}  // namespace probdet
