#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fusemot {

// Wrap an angle into [-pi, pi].
inline double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

// Camera-detector output, image pixels, corner form.
struct Detection2D {
  int frame = 0;
  double left = 0, top = 0, right = 0, bottom = 0;
  double score = 0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double cx() const { return 0.5 * (left + right); }
  double cy() const { return 0.5 * (top + bottom); }
};

// LiDAR-detector output in the rectified camera frame
// (x right, y down, z forward; position is the box bottom-center).
struct Detection3D {
  int frame = 0;
  double h = 0, w = 0, l = 0;
  double x = 0, y = 0, z = 0;
  double rot_y = 0;
  double score = 0;
};

// KITTI per-sequence calibration. Row-major.
struct CalibrationSet {
  double p2[3][4] = {};
  double r_rect[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double tr_velo_cam[3][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  bool has_tr_velo_cam = false;
};

// KITTI tracking ground-truth row, used by the evaluator.
struct GtAnnotation {
  int frame = 0;
  int track_id = 0;
  std::string category;
  int truncated = 0;
  int occluded = 0;
  double left = 0, top = 0, right = 0, bottom = 0;
  double h = 0, w = 0, l = 0;
  double x = 0, y = 0, z = 0;
  double rot_y = 0;
};

template <typename T>
using FrameMap = std::map<int, std::vector<T>>;

}  // namespace fusemot
