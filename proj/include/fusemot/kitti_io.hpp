#pragma once

#include <string>
#include <vector>

#include "fusemot/types.hpp"

namespace fusemot {

// Lines dropped for violating a box invariant; malformed lines throw instead.
struct ParseDiagnostics {
  int rejected_lines = 0;
  std::vector<std::string> messages;
};

// One output row of the tracker in KITTI tracking format.
struct TrackOutputRow {
  int frame = 0;
  int id = 0;
  std::string category = "Car";
  double left = 0, top = 0, right = 0, bottom = 0;
  double h = 0, w = 0, l = 0;
  double x = 0, y = 0, z = 0;
  double rot_y = 0;
  double score = 0;
};

// CSV `frame,left,top,right,bottom,score`.
FrameMap<Detection2D> read_detections_2d(const std::string& path,
                                         ParseDiagnostics* diag = nullptr);

// CSV `frame,h,w,l,x,y,z,rot_y,score`; rot_y wrapped into [-pi, pi].
FrameMap<Detection3D> read_detections_3d(const std::string& path,
                                         ParseDiagnostics* diag = nullptr);

CalibrationSet read_calibration(const std::string& path);
void write_calibration(const std::string& path, const CalibrationSet& calib);

// KITTI tracking label file (ground truth for evaluation).
FrameMap<GtAnnotation> read_gt_labels(const std::string& path);
void write_gt_labels(const std::string& path, const FrameMap<GtAnnotation>& gt);

// One line per row: `frame id type truncated occluded alpha left top right
// bottom h w l x y z rot_y score`, sorted by frame then id.
void write_tracks(const std::string& path, const std::vector<TrackOutputRow>& rows);
FrameMap<TrackOutputRow> read_tracks(const std::string& path);

double alpha_from_rot_y(double rot_y, double x, double z);

}  // namespace fusemot
