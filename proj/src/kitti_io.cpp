#include "fusemot/kitti_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fusemot {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(line);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, const std::string& path, int lineno) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                             ": parse error: bad numeric field '" + tok + "'");
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

FrameMap<Detection2D> read_detections_2d(const std::string& path, ParseDiagnostics* diag) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FrameMap<Detection2D> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    auto toks = split(line, ',');
    if (toks.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": parse error: expected 6 fields, got " +
                               std::to_string(toks.size()));
    Detection2D d;
    d.frame = static_cast<int>(parse_number(toks[0], path, lineno));
    d.left = parse_number(toks[1], path, lineno);
    d.top = parse_number(toks[2], path, lineno);
    d.right = parse_number(toks[3], path, lineno);
    d.bottom = parse_number(toks[4], path, lineno);
    d.score = parse_number(toks[5], path, lineno);
    if (d.frame < 0 || d.right <= d.left || d.bottom <= d.top) {
      if (diag) {
        ++diag->rejected_lines;
        diag->messages.push_back(path + ":" + std::to_string(lineno) +
                                 ": rejected: degenerate 2D box");
      }
      continue;
    }
    out[d.frame].push_back(d);
  }
  return out;
}

FrameMap<Detection3D> read_detections_3d(const std::string& path, ParseDiagnostics* diag) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FrameMap<Detection3D> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    auto toks = split(line, ',');
    if (toks.size() != 9)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": parse error: expected 9 fields, got " +
                               std::to_string(toks.size()));
    Detection3D d;
    d.frame = static_cast<int>(parse_number(toks[0], path, lineno));
    d.h = parse_number(toks[1], path, lineno);
    d.w = parse_number(toks[2], path, lineno);
    d.l = parse_number(toks[3], path, lineno);
    d.x = parse_number(toks[4], path, lineno);
    d.y = parse_number(toks[5], path, lineno);
    d.z = parse_number(toks[6], path, lineno);
    d.rot_y = wrap_angle(parse_number(toks[7], path, lineno));
    d.score = parse_number(toks[8], path, lineno);
    if (d.frame < 0 || d.h <= 0 || d.w <= 0 || d.l <= 0) {
      if (diag) {
        ++diag->rejected_lines;
        diag->messages.push_back(path + ":" + std::to_string(lineno) +
                                 ": rejected: nonpositive box dimension");
      }
      continue;
    }
    out[d.frame].push_back(d);
  }
  return out;
}

CalibrationSet read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CalibrationSet calib;
  bool have_p2 = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (key == "P2:" || key == "P2") {
      if (vals.size() != 12) throw std::runtime_error(path + ": P2 needs 12 values");
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) calib.p2[r][c] = vals[r * 4 + c];
      have_p2 = true;
    } else if (key == "R_rect" || key == "R_rect:" || key == "R0_rect:" || key == "R0_rect") {
      if (vals.size() != 9) throw std::runtime_error(path + ": R_rect needs 9 values");
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) calib.r_rect[r][c] = vals[r * 3 + c];
    } else if (key == "Tr_velo_to_cam:" || key == "Tr_velo_to_cam" || key == "Tr_velo_cam:") {
      if (vals.size() != 12) throw std::runtime_error(path + ": Tr_velo_to_cam needs 12 values");
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) calib.tr_velo_cam[r][c] = vals[r * 4 + c];
      calib.has_tr_velo_cam = true;
    }
  }
  if (!have_p2) throw std::runtime_error(path + ": calibration missing P2");
  if (calib.p2[0][0] <= 0 || calib.p2[1][1] <= 0)
    throw std::runtime_error(path + ": calibration has nonpositive focal length");
  return calib;
}

void write_calibration(const std::string& path, const CalibrationSet& calib) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto row = [&](const double* v, int n) {
    for (int i = 0; i < n; ++i) out << ' ' << fmt(v[i]);
    out << '\n';
  };
  out << "P2:";
  row(&calib.p2[0][0], 12);
  out << "R_rect";
  row(&calib.r_rect[0][0], 9);
  if (calib.has_tr_velo_cam) {
    out << "Tr_velo_to_cam:";
    row(&calib.tr_velo_cam[0][0], 12);
  }
}

FrameMap<GtAnnotation> read_gt_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FrameMap<GtAnnotation> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    std::istringstream ss(line);
    GtAnnotation g;
    double alpha;
    if (!(ss >> g.frame >> g.track_id >> g.category >> g.truncated >> g.occluded >> alpha >>
          g.left >> g.top >> g.right >> g.bottom >> g.h >> g.w >> g.l >> g.x >> g.y >> g.z >>
          g.rot_y))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": parse error: label row");
    if (g.track_id < 0) continue;  // KITTI DontCare rows carry id -1
    out[g.frame].push_back(g);
  }
  return out;
}

void write_gt_labels(const std::string& path, const FrameMap<GtAnnotation>& gt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [frame, rows] : gt) {
    for (const auto& g : rows) {
      out << g.frame << ' ' << g.track_id << ' ' << g.category << ' ' << g.truncated << ' '
          << g.occluded << ' ' << fmt(alpha_from_rot_y(g.rot_y, g.x, g.z)) << ' ' << fmt(g.left)
          << ' ' << fmt(g.top) << ' ' << fmt(g.right) << ' ' << fmt(g.bottom) << ' ' << fmt(g.h)
          << ' ' << fmt(g.w) << ' ' << fmt(g.l) << ' ' << fmt(g.x) << ' ' << fmt(g.y) << ' '
          << fmt(g.z) << ' ' << fmt(g.rot_y) << '\n';
    }
  }
}

double alpha_from_rot_y(double rot_y, double x, double z) {
  return rot_y - std::atan2(x, z);
}

void write_tracks(const std::string& path, const std::vector<TrackOutputRow>& rows) {
  std::vector<TrackOutputRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : sorted) {
    out << r.frame << ' ' << r.id << ' ' << r.category << " 0 0 "
        << fmt(alpha_from_rot_y(r.rot_y, r.x, r.z)) << ' ' << fmt(r.left) << ' ' << fmt(r.top)
        << ' ' << fmt(r.right) << ' ' << fmt(r.bottom) << ' ' << fmt(r.h) << ' ' << fmt(r.w)
        << ' ' << fmt(r.l) << ' ' << fmt(r.x) << ' ' << fmt(r.y) << ' ' << fmt(r.z) << ' '
        << fmt(r.rot_y) << ' ' << fmt(r.score) << '\n';
  }
}

FrameMap<TrackOutputRow> read_tracks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FrameMap<TrackOutputRow> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    std::istringstream ss(line);
    TrackOutputRow r;
    int truncated, occluded;
    double alpha;
    if (!(ss >> r.frame >> r.id >> r.category >> truncated >> occluded >> alpha >> r.left >>
          r.top >> r.right >> r.bottom >> r.h >> r.w >> r.l >> r.x >> r.y >> r.z >> r.rot_y >>
          r.score))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": parse error: track row");
    out[r.frame].push_back(r);
  }
  return out;
}

}  // namespace fusemot
