#pragma once

#include <string>
#include <vector>

#include "fusemot/kitti_io.hpp"
#include "fusemot/types.hpp"

namespace fusemot {

struct FrameMetrics {
  int frame = 0;
  int matches = 0, fp = 0, fn = 0, idsw = 0;
  double iou_sum = 0.0;
};

// CLEAR-MOT aggregate for one sequence (or a sum over sequences).
struct MetricsReport {
  double mota = 0.0;
  double motp = 0.0;  // mean matched IoU
  long long fp = 0, fn = 0, idsw = 0;
  long long gt = 0;       // total ground-truth boxes
  long long matches = 0;  // total gt-hyp matches
  double iou_sum = 0.0;
  std::vector<FrameMetrics> per_frame;

  void finalize();  // recompute mota/motp from the counts
  std::string to_text() const;
  std::string to_keyvalue() const;
};

// 2D-IoU CLEAR evaluation with correspondence persistence. Frames are the
// union of both key sets; iou_gate defaults to the KITTI car convention.
MetricsReport evaluate_clear(const FrameMap<GtAnnotation>& gt,
                             const FrameMap<TrackOutputRow>& hyp, double iou_gate = 0.5);

MetricsReport sum_reports(const std::vector<MetricsReport>& reports);

}  // namespace fusemot
