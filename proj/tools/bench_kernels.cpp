// Compares the OpenMP similarity-matrix kernel against the serial reference
// on growing box grids and reports throughput for both.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "fusemot/association.hpp"

using namespace fusemot;

namespace {

std::vector<Box3D> random_boxes(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  std::uniform_real_distribution<double> depth(5.0, 80.0);
  std::uniform_real_distribution<double> dim(1.0, 5.0);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::vector<Box3D> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back({pos(rng), pos(rng) * 0.05, depth(rng), dim(rng), dim(rng), dim(rng), ang(rng)});
  return out;
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::printf("%8s %14s %14s %10s %10s\n", "size", "serial_s", "omp_s", "speedup", "match");
  for (int n : {32, 64, 128, 256, 512}) {
    auto dets = random_boxes(n, 1);
    auto tracks = random_boxes(n, 2);
    SimilarityMatrix ref, par;
    double ts = time_best_of(3, [&] { ref = build_similarity_serial(dets, tracks); });
    double tp = time_best_of(3, [&] { par = build_similarity(dets, tracks); });
    bool same = ref.data.size() == par.data.size();
    for (size_t i = 0; same && i < ref.data.size(); ++i)
      same = ref.data[i].score == par.data[i].score && ref.data[i].branch == par.data[i].branch;
    std::printf("%4dx%-4d %14.6f %14.6f %10.2f %10s\n", n, n, ts, tp, ts / tp,
                same ? "ok" : "MISMATCH");
    if (!same) return 1;
  }
  return 0;
}
