#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fusemot/types.hpp"

namespace fusemot {

struct Box2D {
  double left = 0, top = 0, right = 0, bottom = 0;

  double area() const {
    double w = right - left, h = bottom - top;
    return (w > 0 && h > 0) ? w * h : 0.0;
  }
};

// Rectified-camera-frame cuboid; center is the bottom-center of the box,
// yaw about the (downward) y axis. Length runs along x at yaw 0, width
// along z, height up (toward negative y).
struct Box3D {
  double x = 0, y = 0, z = 0;
  double h = 0, w = 0, l = 0;
  double yaw = 0;

  double volume() const { return h * w * l; }
};

inline Box3D to_box3d(const Detection3D& d) {
  return Box3D{d.x, d.y, d.z, d.h, d.w, d.l, d.rot_y};
}

inline Box2D to_box2d(const Detection2D& d) {
  return Box2D{d.left, d.top, d.right, d.bottom};
}

// Ordered counterclockwise vertex list in the ground plane (x, z).
using ConvexPolygon = std::vector<std::array<double, 2>>;

// The 8 cuboid corners in camera coordinates. Corners 0-3 are the bottom
// face (y = center.y), 4-7 the top face (y = center.y - h).
std::array<std::array<double, 3>, 8> box3d_corners(const Box3D& box);

// Project a 3D box through P2 onto the image; the result is the axis-aligned
// hull of the 8 projected corners clipped to the image. Empty when any corner
// lies closer than 0.1 m to the camera plane or the clipped box has no area.
std::optional<Box2D> project_box3d(const Box3D& box, const CalibrationSet& calib,
                                   double image_width, double image_height);

double iou_2d(const Box2D& a, const Box2D& b);

// CCW footprint of the box in the (x, z) ground plane.
ConvexPolygon bev_footprint(const Box3D& box);

// Shoelace area of a CCW convex polygon.
double polygon_area(const ConvexPolygon& poly);

// Clip subject against each edge of a convex CCW clip polygon.
ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

// Ground-plane intersection area of the two yaw-rotated footprints.
double bev_intersection_area(const Box3D& a, const Box3D& b);

// Volume IoU: BEV intersection times the vertical overlap on y.
double iou_3d(const Box3D& a, const Box3D& b);

// 1 / (1 + ||center(a) - center(b)||).
double normalized_distance(const Box3D& a, const Box3D& b);

}  // namespace fusemot
