#include "fusemot/tracker.hpp"

#include <algorithm>
#include <stdexcept>

#include "fusemot/geometry.hpp"

namespace fusemot {

TrackerParams TrackerParams::from_config(const Config& cfg) {
  TrackerParams p;
  p.gates3d.iou_min = cfg.get_double("assoc.iou3d_gate");
  p.gates3d.dist_max_m = cfg.get_double("assoc.dist_gate_m");
  p.iou2d_gate = cfg.get_double("assoc.iou2d_gate");
  p.min_hits = cfg.get_int("track.min_hits");
  p.miss_to_reappear = cfg.get_int("track.miss_to_reappear");
  p.max_age = cfg.get_int("track.max_age");
  p.output_coasting = cfg.get_bool("output.coasting");
  p.snap_2d = cfg.get_string("2d_motion") == "snap";
  p.image_width = cfg.get_double("image.width");
  p.image_height = cfg.get_double("image.height");
  return p;
}

int Tracker::birth(TrackMode mode, const FusedDetection* fused, const Detection3D* det3d,
                   const Detection2D* det2d) {
  Track t;
  t.id = next_id_++;
  t.mode = mode;
  t.matched = true;
  t.born_this_frame = true;
  if (fused) {
    // Detections seen by both sensors confirm immediately.
    t.state = TrackState::Confirmed;
    t.filter3d.emplace(fused->det3d, params_.noise);
    t.box3d = t.filter3d->box();
    t.box2d = to_box2d(fused->det2d);
    t.box2d_from_det = true;
    t.score = fused->det3d.score;
  } else if (det3d) {
    t.state = TrackState::Tentative;
    t.filter3d.emplace(*det3d, params_.noise);
    t.box3d = t.filter3d->box();
    t.score = det3d->score;
  } else {
    t.state = TrackState::Tentative;
    t.filter2d.emplace(*det2d, params_.noise);
    t.box2d = to_box2d(*det2d);
    t.box2d_from_det = true;
    t.score = det2d->score;
  }
  tracks_.push_back(std::move(t));
  return static_cast<int>(tracks_.size()) - 1;
}

std::vector<FrameOutputRow> Tracker::step(int frame, const FrameDetections& fd,
                                          const CalibrationSet& calib) {
  if (frame <= last_frame_)
    throw std::runtime_error("tracker frames must be strictly increasing (got " +
                             std::to_string(frame) + " after " + std::to_string(last_frame_) + ")");
  last_frame_ = frame;

  // Predict every live filter exactly once.
  for (Track& t : tracks_) {
    t.matched = false;
    t.born_this_frame = false;
    t.box2d_from_det = false;
    if (t.mode == TrackMode::ThreeD) {
      t.pred3d = t.filter3d->predict();
      auto proj = project_box3d(t.pred3d, calib, params_.image_width, params_.image_height);
      t.pred2d = proj.value_or(t.box2d);
    } else {
      t.pred2d = params_.snap_2d ? t.box2d : t.filter2d->predict();
    }
  }

  // --- Level 1: fused detections vs 3D trajectories -------------------------
  std::vector<int> tracks3d;
  for (int i = 0; i < static_cast<int>(tracks_.size()); ++i)
    if (tracks_[i].mode == TrackMode::ThreeD) tracks3d.push_back(i);

  std::vector<Box3D> det_boxes;
  det_boxes.reserve(fd.fused.size());
  for (const auto& f : fd.fused) det_boxes.push_back(to_box3d(f.det3d));
  std::vector<Box3D> track_boxes;
  track_boxes.reserve(tracks3d.size());
  for (int i : tracks3d) track_boxes.push_back(tracks_[i].pred3d);

  AssignmentResult l1 =
      solve_gated_assignment(build_similarity(det_boxes, track_boxes), params_.gates3d);
  std::vector<int> unmatched3d;
  for (auto [d, c] : l1.matches) {
    Track& t = tracks_[tracks3d[c]];
    t.filter3d->update(fd.fused[d].det3d);
    t.box3d = t.filter3d->box();
    t.box2d = to_box2d(fd.fused[d].det2d);
    t.box2d_from_det = true;
    t.score = fd.fused[d].det3d.score;
    t.matched = true;
  }
  for (int c : l1.unmatched_cols) unmatched3d.push_back(tracks3d[c]);
  for (int d : l1.unmatched_rows) birth(TrackMode::ThreeD, &fd.fused[d], nullptr, nullptr);

  // --- Level 2: 3D-only detections vs tracks unmatched at level 1 -----------
  det_boxes.clear();
  for (const auto& d : fd.only_3d) det_boxes.push_back(to_box3d(d));
  track_boxes.clear();
  for (int i : unmatched3d) track_boxes.push_back(tracks_[i].pred3d);

  AssignmentResult l2 =
      solve_gated_assignment(build_similarity(det_boxes, track_boxes), params_.gates3d);
  std::vector<int> level4_candidates;
  for (auto [d, c] : l2.matches) {
    Track& t = tracks_[unmatched3d[c]];
    t.filter3d->update(fd.only_3d[d]);
    t.box3d = t.filter3d->box();
    t.score = fd.only_3d[d].score;
    t.matched = true;
  }
  for (int c : l2.unmatched_cols) level4_candidates.push_back(unmatched3d[c]);
  for (int d : l2.unmatched_rows) birth(TrackMode::ThreeD, nullptr, &fd.only_3d[d], nullptr);

  // --- Level 3: 2D-only detections vs 2D trajectories -----------------------
  std::vector<int> tracks2d;
  for (int i = 0; i < static_cast<int>(tracks_.size()); ++i)
    if (tracks_[i].mode == TrackMode::TwoDOnly && !tracks_[i].born_this_frame)
      tracks2d.push_back(i);

  {
    const int rows = static_cast<int>(fd.only_2d.size());
    const int cols = static_cast<int>(tracks2d.size());
    std::vector<std::vector<double>> iou(rows, std::vector<double>(cols, 0.0));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        iou[r][c] = iou_2d(to_box2d(fd.only_2d[r]), tracks_[tracks2d[c]].pred2d);
    AssignmentResult l3 = solve_assignment(iou, params_.iou2d_gate);
    for (auto [d, c] : l3.matches) {
      Track& t = tracks_[tracks2d[c]];
      if (params_.snap_2d)
        t.box2d = to_box2d(fd.only_2d[d]);
      else {
        t.filter2d->update(fd.only_2d[d]);
        t.box2d = t.filter2d->box();
      }
      t.box2d_from_det = true;
      t.score = fd.only_2d[d].score;
      t.matched = true;
    }
    for (int d : l3.unmatched_rows) birth(TrackMode::TwoDOnly, nullptr, nullptr, &fd.only_2d[d]);
  }

  // --- Level 4: unmatched/new 3D trajectories merge into 2D trajectories ----
  // Candidates are 3D tracks with no trajectory-level match this frame:
  // leftovers from level 2 plus tracks born at levels 1-2.
  for (int i = 0; i < static_cast<int>(tracks_.size()); ++i)
    if (tracks_[i].born_this_frame && tracks_[i].mode == TrackMode::ThreeD)
      level4_candidates.push_back(i);

  std::vector<int> merge2d;
  for (int i = 0; i < static_cast<int>(tracks_.size()); ++i)
    if (tracks_[i].mode == TrackMode::TwoDOnly && !tracks_[i].born_this_frame)
      merge2d.push_back(i);

  std::vector<char> dead(tracks_.size(), 0);
  if (!level4_candidates.empty() && !merge2d.empty()) {
    const int rows = static_cast<int>(level4_candidates.size());
    const int cols = static_cast<int>(merge2d.size());
    std::vector<std::vector<double>> iou(rows, std::vector<double>(cols, 0.0));
    for (int r = 0; r < rows; ++r) {
      const Track& c3 = tracks_[level4_candidates[r]];
      Box3D pred = c3.born_this_frame ? c3.box3d : c3.pred3d;
      auto proj = project_box3d(pred, calib, params_.image_width, params_.image_height);
      if (!proj) continue;
      for (int c = 0; c < cols; ++c) iou[r][c] = iou_2d(*proj, tracks_[merge2d[c]].box2d);
    }
    AssignmentResult l4 = solve_assignment(iou, params_.iou2d_gate);
    for (auto [r, c] : l4.matches) {
      Track& src = tracks_[level4_candidates[r]];   // 3D side, id retired
      Track& dst = tracks_[merge2d[c]];             // keeps id, state, hit history
      dst.mode = TrackMode::ThreeD;
      dst.filter3d = std::move(src.filter3d);
      dst.filter2d.reset();
      dst.box3d = src.box3d;
      dst.pred3d = src.born_this_frame ? src.box3d : src.pred3d;
      dst.matched = dst.matched || src.matched;
      dst.score = std::max(dst.score, src.score);
      dead[level4_candidates[r]] = 1;
    }
  }
  if (std::any_of(dead.begin(), dead.end(), [](char c) { return c != 0; })) {
    std::vector<Track> kept;
    kept.reserve(tracks_.size());
    for (size_t i = 0; i < tracks_.size(); ++i)
      if (!dead[i]) kept.push_back(std::move(tracks_[i]));
    tracks_.swap(kept);
  }

  update_lifecycle(frame);

  // --- Output ----------------------------------------------------------------
  std::vector<FrameOutputRow> out;
  for (Track& t : tracks_) {
    bool emit = t.state == TrackState::Confirmed ||
                (t.state == TrackState::Reappeared && params_.output_coasting);
    if (!emit) continue;
    FrameOutputRow row;
    row.id = t.id;
    row.score = t.score;
    if (t.mode == TrackMode::ThreeD) {
      row.has_3d = true;
      row.box3d = t.filter3d->box();
      if (t.box2d_from_det) {
        row.box2d = t.box2d;
      } else {
        auto proj = project_box3d(row.box3d, calib, params_.image_width, params_.image_height);
        row.box2d = proj.value_or(t.box2d);
        t.box2d = row.box2d;
      }
    } else {
      row.box2d = t.matched ? t.box2d : t.pred2d;
      t.box2d = row.box2d;
    }
    out.push_back(row);
  }
  std::sort(out.begin(), out.end(),
            [](const FrameOutputRow& a, const FrameOutputRow& b) { return a.id < b.id; });
  return out;
}

void Tracker::update_lifecycle(int frame) {
  for (Track& t : tracks_) {
    ++t.age;
    TrackState before = t.state;
    if (t.matched) {
      t.misses = 0;
      ++t.hits;
      if (t.state == TrackState::Tentative && t.hits >= params_.min_hits)
        t.state = TrackState::Confirmed;
      else if (t.state == TrackState::Reappeared)
        t.state = TrackState::Confirmed;
    } else {
      t.hits = 0;
      ++t.misses;
      if (t.state == TrackState::Tentative)
        t.state = TrackState::Dead;
      else if (t.state == TrackState::Confirmed && t.misses > params_.miss_to_reappear)
        t.state = TrackState::Reappeared;
      else if (t.state == TrackState::Reappeared && t.misses > params_.max_age)
        t.state = TrackState::Dead;
    }
    if (t.state != before) transitions_.push_back({frame, t.id, before, t.state});
  }
  tracks_.erase(std::remove_if(tracks_.begin(), tracks_.end(),
                               [](const Track& t) { return t.state == TrackState::Dead; }),
                tracks_.end());
}

}  // namespace fusemot
