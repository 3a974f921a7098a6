#include "fusemot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fusemot {

std::array<std::array<double, 3>, 8> box3d_corners(const Box3D& box) {
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const double hl = 0.5 * box.l, hw = 0.5 * box.w;
  // Local footprint corners (length along x, width along z), CCW in (x, z).
  const double lx[4] = {hl, -hl, -hl, hl};
  const double lz[4] = {hw, hw, -hw, -hw};
  std::array<std::array<double, 3>, 8> out;
  for (int i = 0; i < 4; ++i) {
    // Rotation about the y axis in camera coordinates.
    double rx = c * lx[i] + s * lz[i];
    double rz = -s * lx[i] + c * lz[i];
    out[i] = {box.x + rx, box.y, box.z + rz};
    out[i + 4] = {box.x + rx, box.y - box.h, box.z + rz};
  }
  return out;
}

std::optional<Box2D> project_box3d(const Box3D& box, const CalibrationSet& calib,
                                   double image_width, double image_height) {
  constexpr double kNearPlane = 0.1;
  const auto corners = box3d_corners(box);
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  double vmin = umin, vmax = -umin;
  for (const auto& p : corners) {
    const auto& P = calib.p2;
    double depth = P[2][0] * p[0] + P[2][1] * p[1] + P[2][2] * p[2] + P[2][3];
    if (depth <= kNearPlane) return std::nullopt;
    double u = (P[0][0] * p[0] + P[0][1] * p[1] + P[0][2] * p[2] + P[0][3]) / depth;
    double v = (P[1][0] * p[0] + P[1][1] * p[1] + P[1][2] * p[2] + P[1][3]) / depth;
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  Box2D b{std::clamp(umin, 0.0, image_width), std::clamp(vmin, 0.0, image_height),
          std::clamp(umax, 0.0, image_width), std::clamp(vmax, 0.0, image_height)};
  if (b.area() <= 0.0) return std::nullopt;
  return b;
}

double iou_2d(const Box2D& a, const Box2D& b) {
  double iw = std::min(a.right, b.right) - std::max(a.left, b.left);
  double ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (iw <= 0 || ih <= 0) return 0.0;
  double inter = iw * ih;
  double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

ConvexPolygon bev_footprint(const Box3D& box) {
  const auto corners = box3d_corners(box);
  ConvexPolygon poly;
  poly.reserve(4);
  for (int i = 0; i < 4; ++i) poly.push_back({corners[i][0], corners[i][2]});
  if (polygon_area(poly) < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

double polygon_area(const ConvexPolygon& poly) {
  if (poly.size() < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * s;
}

namespace {

// Signed distance of p left of the directed edge a->b (CCW interior).
inline double edge_side(const std::array<double, 2>& a, const std::array<double, 2>& b,
                        const std::array<double, 2>& p) {
  return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
}

inline std::array<double, 2> edge_intersect(const std::array<double, 2>& a,
                                            const std::array<double, 2>& b,
                                            const std::array<double, 2>& p,
                                            const std::array<double, 2>& q) {
  double da = edge_side(a, b, p);
  double db = edge_side(a, b, q);
  double t = da / (da - db);
  return {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
}

}  // namespace

ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  ConvexPolygon out = subject;
  for (size_t i = 0; i < clip.size() && !out.empty(); ++i) {
    const auto& a = clip[i];
    const auto& b = clip[(i + 1) % clip.size()];
    ConvexPolygon in;
    in.swap(out);
    for (size_t j = 0; j < in.size(); ++j) {
      const auto& p = in[j];
      const auto& q = in[(j + 1) % in.size()];
      double sp = edge_side(a, b, p);
      double sq = edge_side(a, b, q);
      if (sp >= 0) {
        out.push_back(p);
        if (sq < 0) out.push_back(edge_intersect(a, b, p, q));
      } else if (sq >= 0) {
        out.push_back(edge_intersect(a, b, p, q));
      }
    }
  }
  return out;
}

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  ConvexPolygon inter = clip_convex(bev_footprint(a), bev_footprint(b));
  return inter.size() >= 3 ? std::abs(polygon_area(inter)) : 0.0;
}

double iou_3d(const Box3D& a, const Box3D& b) {
  // y runs downward: the box occupies [center.y - h, center.y].
  double ylo = std::max(a.y - a.h, b.y - b.h);
  double yhi = std::min(a.y, b.y);
  double dy = yhi - ylo;
  if (dy <= 0) return 0.0;
  double inter_area = bev_intersection_area(a, b);
  if (inter_area <= 0) return 0.0;
  double inter = inter_area * dy;
  double uni = a.volume() + b.volume() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

double normalized_distance(const Box3D& a, const Box3D& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return 1.0 / (1.0 + std::sqrt(dx * dx + dy * dy + dz * dz));
}

}  // namespace fusemot
