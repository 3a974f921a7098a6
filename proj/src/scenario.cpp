#include "fusemot/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fusemot/geometry.hpp"
#include "fusemot/kitti_io.hpp"

namespace fusemot {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draws: one generator per (object, frame) so editing a
// scenario does not reshuffle unrelated randomness.
std::mt19937_64 rng_for(uint64_t seed, int object, int frame) {
  uint64_t s = splitmix64(seed ^ splitmix64(static_cast<uint64_t>(object) << 32 ^
                                            static_cast<uint64_t>(frame)));
  return std::mt19937_64(s);
}

double truncated_gauss(std::mt19937_64& rng, double sigma) {
  std::normal_distribution<double> dist(0.0, 1.0);
  double v = dist(rng);
  return std::clamp(v, -3.0, 3.0) * sigma;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<double> parse_csv_nums(const std::string& s) {
  std::vector<double> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (frames <= 0) throw std::runtime_error("scenario: frames must be positive");
  if (lidar_range > camera_range)
    throw std::runtime_error("scenario: lidar_range must not exceed camera_range");
  if (dropout < 0.0 || dropout > 1.0) throw std::runtime_error("scenario: dropout not in [0,1]");
  for (const auto& o : objects)
    if (o.h <= 0 || o.w <= 0 || o.l <= 0)
      throw std::runtime_error("scenario: object dims must be positive");
  for (const auto& occ : occlusions)
    if (occ.object < 0 || occ.object >= static_cast<int>(objects.size()))
      throw std::runtime_error("scenario: occlusion references unknown object");
}

ScenarioConfig read_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path);
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    std::string value = line.substr(eq + 1);

    auto bad = [&](const std::string& why) {
      return std::runtime_error(path + ":" + std::to_string(lineno) + ": " + why);
    };
    if (key == "frames") cfg.frames = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "camera_range") cfg.camera_range = std::stod(value);
    else if (key == "lidar_range") cfg.lidar_range = std::stod(value);
    else if (key == "noise_2d_px") cfg.noise_2d_px = std::stod(value);
    else if (key == "noise_3d_m") cfg.noise_3d_m = std::stod(value);
    else if (key == "dropout") cfg.dropout = std::stod(value);
    else if (key == "image_width") cfg.image_width = std::stod(value);
    else if (key == "image_height") cfg.image_height = std::stod(value);
    else if (key == "object") {
      // object = birth=0 pos=0,1.6,90 vel=0,0,-1.5 dims=1.5,1.6,3.9 yaw=0
      ObjectSpec o;
      for (const auto& tok : split_ws(value)) {
        auto e = tok.find('=');
        if (e == std::string::npos) throw bad("object field needs key=value: " + tok);
        std::string k = tok.substr(0, e), v = tok.substr(e + 1);
        if (k == "birth") o.birth_frame = std::stoi(v);
        else if (k == "yaw") o.yaw = std::stod(v);
        else if (k == "pos") {
          auto p = parse_csv_nums(v);
          if (p.size() != 3) throw bad("pos needs 3 numbers");
          o.x = p[0]; o.y = p[1]; o.z = p[2];
        } else if (k == "vel") {
          auto p = parse_csv_nums(v);
          if (p.size() != 3) throw bad("vel needs 3 numbers");
          o.vx = p[0]; o.vy = p[1]; o.vz = p[2];
        } else if (k == "dims") {
          auto p = parse_csv_nums(v);
          if (p.size() != 3) throw bad("dims needs 3 numbers (h,w,l)");
          o.h = p[0]; o.w = p[1]; o.l = p[2];
        } else {
          throw bad("unknown object field: " + k);
        }
      }
      cfg.objects.push_back(o);
    } else if (key == "occlusion") {
      OcclusionWindow occ;
      for (const auto& tok : split_ws(value)) {
        auto e = tok.find('=');
        if (e == std::string::npos) throw bad("occlusion field needs key=value: " + tok);
        std::string k = tok.substr(0, e), v = tok.substr(e + 1);
        if (k == "obj") occ.object = std::stoi(v);
        else if (k == "from") occ.from = std::stoi(v);
        else if (k == "to") occ.to = std::stoi(v);
        else throw bad("unknown occlusion field: " + k);
      }
      cfg.occlusions.push_back(occ);
    } else {
      throw bad("unknown scenario key: " + key);
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioBundle generate(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioBundle bundle;
  CalibrationSet& calib = bundle.calib;
  calib.p2[0][0] = cfg.focal;
  calib.p2[0][2] = cfg.cx;
  calib.p2[1][1] = cfg.focal;
  calib.p2[1][2] = cfg.cy;
  calib.p2[2][2] = 1.0;

  for (int frame = 0; frame < cfg.frames; ++frame) {
    for (int oi = 0; oi < static_cast<int>(cfg.objects.size()); ++oi) {
      const ObjectSpec& o = cfg.objects[oi];
      if (frame < o.birth_frame) continue;
      int t = frame - o.birth_frame;
      Box3D box{o.x + t * o.vx, o.y + t * o.vy, o.z + t * o.vz, o.h, o.w, o.l,
                wrap_angle(o.yaw)};
      auto proj = project_box3d(box, calib, cfg.image_width, cfg.image_height);
      if (!proj) continue;

      GtAnnotation g;
      g.frame = frame;
      g.track_id = oi;
      g.category = "Car";
      g.left = proj->left;
      g.top = proj->top;
      g.right = proj->right;
      g.bottom = proj->bottom;
      g.h = box.h; g.w = box.w; g.l = box.l;
      g.x = box.x; g.y = box.y; g.z = box.z;
      g.rot_y = box.yaw;
      bundle.gt[frame].push_back(g);

      bool occluded = false;
      for (const auto& occ : cfg.occlusions)
        if (occ.object == oi && frame >= occ.from && frame <= occ.to) occluded = true;

      // Fixed draw order per object-frame; draws happen whether or not a
      // detection is emitted so dropout stays monotone in its probability.
      auto rng = rng_for(cfg.seed, oi, frame);
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      double drop2d = uni(rng), drop3d = uni(rng);
      double nx2 = truncated_gauss(rng, cfg.noise_2d_px);
      double ny2 = truncated_gauss(rng, cfg.noise_2d_px);
      double nx3 = truncated_gauss(rng, cfg.noise_3d_m);
      double ny3 = truncated_gauss(rng, cfg.noise_3d_m);
      double nz3 = truncated_gauss(rng, cfg.noise_3d_m);
      if (occluded) continue;

      if (box.z <= cfg.camera_range && drop2d >= cfg.dropout) {
        Detection2D d;
        d.frame = frame;
        d.left = proj->left + nx2;
        d.right = proj->right + nx2;
        d.top = proj->top + ny2;
        d.bottom = proj->bottom + ny2;
        d.score = 0.9;
        bundle.dets2d[frame].push_back(d);
      }
      if (box.z <= cfg.lidar_range && drop3d >= cfg.dropout) {
        Detection3D d;
        d.frame = frame;
        d.h = box.h; d.w = box.w; d.l = box.l;
        d.x = box.x + nx3;
        d.y = box.y + ny3;
        d.z = box.z + nz3;
        d.rot_y = box.yaw;
        d.score = 0.9;
        bundle.dets3d[frame].push_back(d);
      }
    }
  }
  return bundle;
}

void write_bundle(const ScenarioBundle& bundle, const std::string& dir,
                  const std::string& seq_name) {
  namespace fs = std::filesystem;
  const std::string file = seq_name + ".txt";
  for (const char* sub : {"dets_2d", "dets_3d", "calib", "label"})
    fs::create_directories(fs::path(dir) / sub);
  write_gt_labels((fs::path(dir) / "label" / file).string(), bundle.gt);
  write_calibration((fs::path(dir) / "calib" / file).string(), bundle.calib);

  std::ofstream d2((fs::path(dir) / "dets_2d" / file).string());
  std::ofstream d3((fs::path(dir) / "dets_3d" / file).string());
  if (!d2 || !d3) throw std::runtime_error("cannot write detection files in " + dir);
  char buf[256];
  for (const auto& [frame, dets] : bundle.dets2d)
    for (const auto& d : dets) {
      std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", d.frame, d.left, d.top,
                    d.right, d.bottom, d.score);
      d2 << buf;
    }
  for (const auto& [frame, dets] : bundle.dets3d)
    for (const auto& d : dets) {
      std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", d.frame,
                    d.h, d.w, d.l, d.x, d.y, d.z, d.rot_y, d.score);
      d3 << buf;
    }
}

}  // namespace fusemot
