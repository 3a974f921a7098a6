#pragma once

#include <optional>
#include <vector>

#include "fusemot/association.hpp"
#include "fusemot/config.hpp"
#include "fusemot/fusion.hpp"
#include "fusemot/state_estimation.hpp"

namespace fusemot {

enum class TrackState { Tentative, Confirmed, Reappeared, Dead };

enum class TrackMode { TwoDOnly, ThreeD };

struct Track {
  int id = -1;
  TrackState state = TrackState::Tentative;
  TrackMode mode = TrackMode::ThreeD;
  std::optional<Filter3D> filter3d;
  std::optional<Filter2D> filter2d;
  int hits = 0;    // consecutive matches
  int misses = 0;  // consecutive misses
  int age = 0;     // frames since birth
  Box2D box2d{};
  Box3D box3d{};
  double score = 0.0;

  // Per-frame scratch, reset at the start of step().
  bool matched = false;
  bool born_this_frame = false;
  bool box2d_from_det = false;
  Box3D pred3d{};
  Box2D pred2d{};
};

struct FrameOutputRow {
  int id = -1;
  Box2D box2d{};
  bool has_3d = false;
  Box3D box3d{};
  double score = 0.0;
};

struct TrackerParams {
  AssignmentGates gates3d{0.1, 4.0};
  double iou2d_gate = 0.3;
  int min_hits = 3;
  int miss_to_reappear = 2;
  int max_age = 30;
  bool output_coasting = false;
  bool snap_2d = false;  // 2d_motion=snap: 2D tracks follow detections directly
  double image_width = 1242;
  double image_height = 375;
  FilterNoise noise{};

  static TrackerParams from_config(const Config& cfg);
};

struct StateTransition {
  int frame = 0;
  int id = -1;
  TrackState from = TrackState::Tentative;
  TrackState to = TrackState::Tentative;
};

// Per-frame orchestrator: four association levels then lifecycle update.
// Strictly sequential per sequence; frames must arrive in increasing order.
class Tracker {
 public:
  explicit Tracker(const TrackerParams& params) : params_(params) {}

  std::vector<FrameOutputRow> step(int frame, const FrameDetections& fd,
                                   const CalibrationSet& calib);

  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<StateTransition>& transitions() const { return transitions_; }
  int next_id() const { return next_id_; }

 private:
  int birth(TrackMode mode, const FusedDetection* fused, const Detection3D* det3d,
            const Detection2D* det2d);
  void update_lifecycle(int frame);

  TrackerParams params_;
  std::vector<Track> tracks_;
  std::vector<StateTransition> transitions_;
  int next_id_ = 0;
  int last_frame_ = -1;
};

}  // namespace fusemot
