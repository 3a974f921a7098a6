#include "fusemot/fusion.hpp"

#include "fusemot/geometry.hpp"

namespace fusemot {

FrameDetections fuse_frame(const std::vector<Detection2D>& dets2d,
                           const std::vector<Detection3D>& dets3d,
                           const CalibrationSet& calib, double image_width,
                           double image_height, double iou_threshold) {
  FrameDetections out;

  std::vector<int> projectable;        // indices into dets3d
  std::vector<Box2D> projected;
  for (int i = 0; i < static_cast<int>(dets3d.size()); ++i) {
    auto box = project_box3d(to_box3d(dets3d[i]), calib, image_width, image_height);
    if (box) {
      projectable.push_back(i);
      projected.push_back(*box);
    } else {
      out.only_3d.push_back(dets3d[i]);
    }
  }

  const int n3 = static_cast<int>(projectable.size());
  const int n2 = static_cast<int>(dets2d.size());
  std::vector<std::vector<double>> iou(n3, std::vector<double>(n2, 0.0));
  const int total = n3 * n2;
#pragma omp parallel for schedule(static) if (total > 256)
  for (int idx = 0; idx < total; ++idx) {
    int r = idx / n2, c = idx % n2;
    iou[r][c] = iou_2d(projected[r], to_box2d(dets2d[c]));
  }

  AssignmentResult assign = solve_assignment(iou, 0.0);
  std::vector<char> used2d(n2, 0);
  std::vector<char> fused3d(n3, 0);
  for (auto [r, c] : assign.matches) {
    if (iou[r][c] > iou_threshold) {
      out.fused.push_back({dets3d[projectable[r]], dets2d[c], iou[r][c]});
      used2d[c] = 1;
      fused3d[r] = 1;
    }
  }
  for (int r = 0; r < n3; ++r)
    if (!fused3d[r]) out.only_3d.push_back(dets3d[projectable[r]]);
  for (int c = 0; c < n2; ++c)
    if (!used2d[c]) out.only_2d.push_back(dets2d[c]);
  return out;
}

}  // namespace fusemot
