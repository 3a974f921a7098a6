#include "fusemot/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "fusemot/fusion.hpp"
#include "fusemot/geometry.hpp"

namespace fusemot {

Detection3D lidar_to_camera(const Detection3D& det, const CalibrationSet& calib) {
  auto apply = [&](double x, double y, double z, bool point, double out[3]) {
    double t[3];
    for (int r = 0; r < 3; ++r)
      t[r] = calib.tr_velo_cam[r][0] * x + calib.tr_velo_cam[r][1] * y +
             calib.tr_velo_cam[r][2] * z + (point ? calib.tr_velo_cam[r][3] : 0.0);
    for (int r = 0; r < 3; ++r)
      out[r] = calib.r_rect[r][0] * t[0] + calib.r_rect[r][1] * t[1] + calib.r_rect[r][2] * t[2];
  };
  Detection3D out = det;
  double p[3];
  apply(det.x, det.y, det.z, true, p);
  out.x = p[0];
  out.y = p[1];
  out.z = p[2];
  // Heading: length axis (cos yaw, sin yaw, 0) in the LiDAR frame; in the
  // camera frame a box at rot_y points along (cos rot_y, 0, -sin rot_y).
  double h[3];
  apply(std::cos(det.rot_y), std::sin(det.rot_y), 0.0, false, h);
  out.rot_y = wrap_angle(std::atan2(-h[2], h[0]));
  return out;
}

SequenceResult run_sequence(const FrameMap<Detection2D>& dets2d,
                            const FrameMap<Detection3D>& dets3d, const CalibrationSet& calib,
                            const Config& cfg) {
  SequenceResult res;
  const bool lidar_frame = cfg.get_string("input_frame") == "lidar";
  const double image_w = cfg.get_double("image.width");
  const double image_h = cfg.get_double("image.height");
  const double fuse_iou = cfg.get_double("fusion.iou_threshold");
  const std::string category = cfg.get_string("category");

  int last_frame = -1;
  if (!dets2d.empty()) last_frame = dets2d.rbegin()->first;
  if (!dets3d.empty()) last_frame = std::max(last_frame, dets3d.rbegin()->first);

  Tracker tracker(TrackerParams::from_config(cfg));
  static const std::vector<Detection2D> kNo2D;
  static const std::vector<Detection3D> kNo3D;

  using clock = std::chrono::steady_clock;
  for (int frame = 0; frame <= last_frame; ++frame) {
    auto it2 = dets2d.find(frame);
    auto it3 = dets3d.find(frame);
    const auto& d2 = it2 != dets2d.end() ? it2->second : kNo2D;
    std::vector<Detection3D> d3 = it3 != dets3d.end() ? it3->second : kNo3D;
    if (lidar_frame)
      for (auto& d : d3) d = lidar_to_camera(d, calib);

    auto t0 = clock::now();
    FrameDetections fd = fuse_frame(d2, d3, calib, image_w, image_h, fuse_iou);
    std::vector<FrameOutputRow> out = tracker.step(frame, fd, calib);
    res.pipeline_seconds += std::chrono::duration<double>(clock::now() - t0).count();

    for (const auto& o : out) {
      TrackOutputRow row;
      row.frame = frame;
      row.id = o.id;
      row.category = category;
      row.left = o.box2d.left;
      row.top = o.box2d.top;
      row.right = o.box2d.right;
      row.bottom = o.box2d.bottom;
      if (o.has_3d) {
        row.h = o.box3d.h;
        row.w = o.box3d.w;
        row.l = o.box3d.l;
        row.x = o.box3d.x;
        row.y = o.box3d.y;
        row.z = o.box3d.z;
        row.rot_y = o.box3d.yaw;
      } else {
        // 2D-only rows carry sentinel 3D values, KITTI-submission style.
        row.h = row.w = row.l = -1000.0;
        row.x = row.y = row.z = -1000.0;
        row.rot_y = -10.0;
      }
      row.score = o.score;
      res.rows.push_back(row);
    }
  }
  res.frames = last_frame + 1;
  return res;
}

}  // namespace fusemot
