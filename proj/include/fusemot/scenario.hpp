#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fusemot/types.hpp"

namespace fusemot {

struct ObjectSpec {
  int birth_frame = 0;
  double x = 0, y = 1.6, z = 30;     // initial bottom-center, camera frame
  double vx = 0, vy = 0, vz = 0;     // meters per frame
  double h = 1.5, w = 1.6, l = 3.9;
  double yaw = 0;
};

struct OcclusionWindow {
  int object = 0;
  int from = 0, to = 0;  // inclusive frame interval with no detections
};

struct ScenarioConfig {
  int frames = 100;
  uint64_t seed = 0;
  double camera_range = 80.0;  // max z for a 2D detection
  double lidar_range = 40.0;   // max z for a 3D detection
  double noise_2d_px = 0.0;    // sigma, truncated at 3 sigma
  double noise_3d_m = 0.0;
  double dropout = 0.0;        // per-sensor per-object-frame drop probability
  double image_width = 1242, image_height = 375;
  double focal = 721.5377, cx = 609.5593, cy = 172.854;
  std::vector<ObjectSpec> objects;
  std::vector<OcclusionWindow> occlusions;

  void validate() const;  // throws on lidar_range > camera_range etc.
};

struct ScenarioBundle {
  FrameMap<GtAnnotation> gt;
  FrameMap<Detection2D> dets2d;
  FrameMap<Detection3D> dets3d;
  CalibrationSet calib;
};

// Key-value scenario description; see docs in the README.
ScenarioConfig read_scenario_config(const std::string& path);

// Deterministic generation: same config (incl. seed) gives an identical bundle.
ScenarioBundle generate(const ScenarioConfig& cfg);

// Write the bundle in kitti_io formats under dir, as
// dets_2d/<seq>.txt, dets_3d/<seq>.txt, calib/<seq>.txt and label/<seq>.txt.
void write_bundle(const ScenarioBundle& bundle, const std::string& dir,
                  const std::string& seq_name);

}  // namespace fusemot
