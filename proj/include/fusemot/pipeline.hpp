#pragma once

#include <string>
#include <vector>

#include "fusemot/config.hpp"
#include "fusemot/kitti_io.hpp"
#include "fusemot/tracker.hpp"
#include "fusemot/types.hpp"

namespace fusemot {

struct SequenceResult {
  std::vector<TrackOutputRow> rows;
  int frames = 0;
  double pipeline_seconds = 0.0;  // fuse + associate + filter, no I/O
};

// Converts a LiDAR-frame detection into the rectified camera frame using
// R_rect * Tr_velo_to_cam (used when config input_frame=lidar).
Detection3D lidar_to_camera(const Detection3D& det, const CalibrationSet& calib);

// Run the tracker over one sequence. Frames run from 0 to the largest frame
// index present in either detection map.
SequenceResult run_sequence(const FrameMap<Detection2D>& dets2d,
                            const FrameMap<Detection3D>& dets3d, const CalibrationSet& calib,
                            const Config& cfg);

}  // namespace fusemot
