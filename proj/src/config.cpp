#include "fusemot/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fusemot {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config::Config() {
  entries_ = {
      {"fusion.iou_threshold", {"0.5", "min projection IoU for pairing a 3D with a 2D detection"}},
      {"assoc.iou3d_gate", {"0.1", "min 3D IoU accepted on the IoU branch of the cost"}},
      {"assoc.dist_gate_m", {"4.0", "max center distance (m) accepted on the distance branch"}},
      {"assoc.iou2d_gate", {"0.3", "min 2D IoU for level-3 and level-4 association"}},
      {"track.min_hits", {"3", "consecutive matches before a tentative track confirms"}},
      {"track.miss_to_reappear", {"2", "misses before a confirmed track becomes reappeared"}},
      {"track.max_age", {"30", "misses before a reappeared track dies"}},
      {"output.coasting", {"false", "emit predicted boxes for reappeared (coasting) tracks"}},
      {"input_frame", {"camera", "frame of 3D detections: camera | lidar"}},
      {"2d_motion", {"kalman", "2D track motion model: kalman | snap"}},
      {"category", {"Car", "object category written to output rows"}},
      {"image.width", {"1242", "image width in pixels for projection clipping"}},
      {"image.height", {"375", "image height in pixels for projection clipping"}},
  };
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::runtime_error("unknown config key: " + key);
  it->second.value = value;
}

void Config::apply_override(const std::string& key_eq_value) {
  auto eq = key_eq_value.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("--set expects key=value, got: " + key_eq_value);
  set(trim(key_eq_value.substr(0, eq)), trim(key_eq_value.substr(eq + 1)));
}

double Config::get_double(const std::string& key) const {
  return std::stod(get_string(key));
}

int Config::get_int(const std::string& key) const {
  return std::stoi(get_string(key));
}

bool Config::get_bool(const std::string& key) const {
  const std::string& v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config key " + key + " expects a boolean, got: " + v);
}

const std::string& Config::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::runtime_error("unknown config key: " + key);
  return it->second.value;
}

}  // namespace fusemot
