#pragma once

#include <vector>

#include "fusemot/association.hpp"
#include "fusemot/types.hpp"

namespace fusemot {

// A 3D detection paired with a 2D detection via projection IoU.
struct FusedDetection {
  Detection3D det3d;
  Detection2D det2d;
  double pairing_iou = 0.0;
};

struct FrameDetections {
  std::vector<FusedDetection> fused;
  std::vector<Detection2D> only_2d;
  std::vector<Detection3D> only_3d;
};

// Partition one frame's detections into fused / 2D-only / 3D-only. Each 3D
// detection is projected onto the image; pairs are picked by max-weight
// one-to-one assignment on projection IoU and kept when IoU > iou_threshold.
// Unprojectable 3D detections go straight to only_3d.
FrameDetections fuse_frame(const std::vector<Detection2D>& dets2d,
                           const std::vector<Detection3D>& dets3d,
                           const CalibrationSet& calib, double image_width,
                           double image_height, double iou_threshold);

}  // namespace fusemot
