#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fusemot/config.hpp"
#include "fusemot/metrics.hpp"
#include "fusemot/pipeline.hpp"
#include "fusemot/scenario.hpp"

namespace fs = std::filesystem;
using namespace fusemot;

namespace {

struct CommonOpts {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string seqs;
  int jobs = 1;
};

Config make_config(const CommonOpts& opts) {
  Config cfg;
  if (!opts.config_file.empty()) {
    cfg.load_file(opts.config_file);
  } else if (const char* env = std::getenv("FUSEMOT_CONFIG")) {
    cfg.load_file(env);
  }
  for (const auto& kv : opts.overrides) cfg.apply_override(kv);
  return cfg;
}

std::string config_help() {
  std::ostringstream os;
  os << "Config keys (key = default -- description):\n";
  Config defaults;
  for (const auto& [key, entry] : defaults.entries())
    os << "  " << key << " = " << entry.value << " -- " << entry.doc << "\n";
  return os.str();
}

std::vector<std::string> list_sequences(const CommonOpts& opts,
                                        const std::vector<std::string>& dirs) {
  std::set<std::string> names;
  if (!opts.seqs.empty()) {
    std::istringstream ss(opts.seqs);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.insert(tok);
  } else {
    for (const auto& dir : dirs) {
      if (!fs::is_directory(dir)) continue;
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".txt") names.insert(e.path().stem().string());
    }
  }
  return {names.begin(), names.end()};
}

// Run fn(seq) over sequences with up to `jobs` worker threads.
int for_each_sequence(const std::vector<std::string>& seqs, int jobs,
                      const std::function<bool(const std::string&)>& fn) {
  std::atomic<size_t> next{0};
  std::atomic<int> failures{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < seqs.size(); i = next.fetch_add(1))
      if (!fn(seqs[i])) ++failures;
  };
  int n = std::max(1, std::min<int>(jobs, static_cast<int>(seqs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return failures.load();
}

int cmd_track(const CommonOpts& opts, const std::string& dets2d_dir,
              const std::string& dets3d_dir, const std::string& calib_dir,
              const std::string& out_dir) {
  Config cfg = make_config(opts);
  auto seqs = list_sequences(opts, {dets3d_dir, dets2d_dir});
  if (seqs.empty()) {
    std::cerr << "track: no sequences found\n";
    return 1;
  }
  fs::create_directories(out_dir);
  std::mutex io_mutex;
  int failures = for_each_sequence(seqs, opts.jobs, [&](const std::string& seq) {
    try {
      auto t0 = std::chrono::steady_clock::now();
      ParseDiagnostics diag;
      FrameMap<Detection2D> d2;
      FrameMap<Detection3D> d3;
      fs::path p2 = fs::path(dets2d_dir) / (seq + ".txt");
      fs::path p3 = fs::path(dets3d_dir) / (seq + ".txt");
      if (fs::exists(p2)) d2 = read_detections_2d(p2.string(), &diag);
      if (fs::exists(p3)) d3 = read_detections_3d(p3.string(), &diag);
      if (d2.empty() && d3.empty()) throw std::runtime_error("no detections for " + seq);
      CalibrationSet calib = read_calibration((fs::path(calib_dir) / (seq + ".txt")).string());

      SequenceResult res = run_sequence(d2, d3, calib, cfg);
      write_tracks((fs::path(out_dir) / (seq + ".txt")).string(), res.rows);
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      std::lock_guard<std::mutex> lock(io_mutex);
      if (diag.rejected_lines > 0)
        std::cerr << seq << ": rejected " << diag.rejected_lines << " detection line(s)\n";
      std::cout << seq << ": " << res.frames << " frames, "
                << (wall > 0 ? res.frames / wall : 0.0) << " FPS wall, "
                << (res.pipeline_seconds > 0 ? res.frames / res.pipeline_seconds : 0.0)
                << " FPS pipeline-only\n";
      return true;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(io_mutex);
      std::cerr << seq << ": error: " << e.what() << "\n";
      return false;
    }
  });
  return failures == 0 ? 0 : 1;
}

int cmd_eval(const CommonOpts& opts, const std::string& results_dir, const std::string& gt_dir,
             double iou_gate) {
  auto seqs = list_sequences(opts, {results_dir});
  if (seqs.empty()) {
    std::cerr << "eval: no sequences found\n";
    return 1;
  }
  std::vector<MetricsReport> reports;
  for (const auto& seq : seqs) {
    try {
      auto gt = read_gt_labels((fs::path(gt_dir) / (seq + ".txt")).string());
      auto hyp = read_tracks((fs::path(results_dir) / (seq + ".txt")).string());
      MetricsReport rep = evaluate_clear(gt, hyp, iou_gate);
      std::cout << seq << ": " << rep.to_text();
      std::ofstream kv((fs::path(results_dir) / (seq + "_report.txt")).string());
      kv << rep.to_keyvalue();
      reports.push_back(std::move(rep));
    } catch (const std::exception& e) {
      std::cerr << seq << ": error: " << e.what() << "\n";
      return 1;
    }
  }
  MetricsReport total = sum_reports(reports);
  std::cout << "TOTAL: " << total.to_text();
  std::ofstream kv((fs::path(results_dir) / "total_report.txt").string());
  kv << total.to_keyvalue();
  return 0;
}

int cmd_synth(const std::string& scenario_file, const std::string& out_dir,
              const std::string& seq_name) {
  try {
    ScenarioConfig cfg = read_scenario_config(scenario_file);
    ScenarioBundle bundle = generate(cfg);
    write_bundle(bundle, out_dir, seq_name);
    int n2 = 0, n3 = 0;
    for (const auto& [f, v] : bundle.dets2d) n2 += static_cast<int>(v.size());
    for (const auto& [f, v] : bundle.dets3d) n3 += static_cast<int>(v.size());
    std::cout << seq_name << ": " << cfg.frames << " frames, " << n2 << " 2D detections, " << n3
              << " 3D detections\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "synth: error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_bench(const CommonOpts& opts, int frames, int objects) {
  Config cfg = make_config(opts);
  ScenarioConfig scfg;
  scfg.frames = frames;
  scfg.seed = 1234;
  scfg.noise_2d_px = 1.0;
  scfg.noise_3d_m = 0.05;
  for (int i = 0; i < objects; ++i) {
    ObjectSpec o;
    o.x = -12.0 + 1.2 * i;
    o.y = 1.6;
    o.z = 12.0 + 1.1 * (i % 7);
    o.vx = 0.02 * ((i % 5) - 2);
    o.vz = 0.03 * ((i % 3) - 1);
    o.yaw = 0.2 * (i % 4);
    scfg.objects.push_back(o);
  }
  auto t0 = std::chrono::steady_clock::now();
  ScenarioBundle bundle = generate(scfg);
  SequenceResult res = run_sequence(bundle.dets2d, bundle.dets3d, bundle.calib, cfg);
  double end_to_end = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  double fps_pipeline =
      res.pipeline_seconds > 0 ? res.frames / res.pipeline_seconds : 0.0;
  double fps_total = end_to_end > 0 ? res.frames / end_to_end : 0.0;
  std::cout << "frames " << res.frames << "\nobjects_per_frame " << objects
            << "\npipeline_seconds " << res.pipeline_seconds << "\nfps_pipeline " << fps_pipeline
            << "\nend_to_end_seconds " << end_to_end << "\nfps_end_to_end " << fps_total << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fusemot: camera-LiDAR fusion 3D multi-object tracker"};
  app.footer(config_help());
  app.require_subcommand(1);

  CommonOpts common;
  std::string dets2d_dir, dets3d_dir, calib_dir, out_dir, results_dir, gt_dir;
  std::string scenario_file, seq_name = "0000";
  double iou_gate = 0.5;
  int frames = 1000, objects = 20;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_file, "config file (flat key = value)");
    sub->add_option("--set", common.overrides, "config override key=value (repeatable)");
    sub->add_option("--seqs", common.seqs, "comma-separated sequence names");
    sub->add_option("--jobs", common.jobs, "max parallel sequences");
  };

  CLI::App* track = app.add_subcommand("track", "run the tracker over sequences");
  track->add_option("--dets2d", dets2d_dir, "2D detection dir")->required();
  track->add_option("--dets3d", dets3d_dir, "3D detection dir")->required();
  track->add_option("--calib", calib_dir, "calibration dir")->required();
  track->add_option("--out", out_dir, "output dir")->required();
  add_common(track);

  CLI::App* eval = app.add_subcommand("eval", "CLEAR-MOT evaluation of tracking results");
  eval->add_option("--results", results_dir, "tracking result dir")->required();
  eval->add_option("--gt", gt_dir, "ground-truth label dir")->required();
  eval->add_option("--iou-gate", iou_gate, "2D IoU match gate");
  add_common(eval);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic scenario to disk");
  synth->add_option("--scenario", scenario_file, "scenario config file")->required();
  synth->add_option("--out", out_dir, "output dir")->required();
  synth->add_option("--seq", seq_name, "sequence name");

  CLI::App* bench = app.add_subcommand("bench", "throughput on a synthetic workload");
  bench->add_option("--frames", frames, "frame count");
  bench->add_option("--objects", objects, "objects per frame");
  add_common(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (track->parsed()) return cmd_track(common, dets2d_dir, dets3d_dir, calib_dir, out_dir);
    if (eval->parsed()) return cmd_eval(common, results_dir, gt_dir, iou_gate);
    if (synth->parsed()) return cmd_synth(scenario_file, out_dir, seq_name);
    if (bench->parsed()) return cmd_bench(common, frames, objects);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
