#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fusemot/geometry.hpp"

namespace fusemot {

enum class CostBranch : uint8_t { Iou, Distance };

struct PairCost {
  double score = 0.0;
  CostBranch branch = CostBranch::Iou;
};

// Rows are detections, cols are tracks; entries in [0, 1] with branch tags.
struct SimilarityMatrix {
  int rows = 0, cols = 0;
  std::vector<PairCost> data;  // row-major

  PairCost& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  const PairCost& at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

struct AssignmentGates {
  double iou_min = 0.1;       // IoU branch: score >= iou_min
  double dist_max_m = 4.0;    // distance branch: center distance <= dist_max_m
};

struct AssignmentResult {
  std::vector<std::pair<int, int>> matches;  // (row, col)
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
};

// Hybrid cost: 3D IoU when positive, normalized center distance otherwise.
PairCost cost_fused(const Box3D& det, const Box3D& track_pred);

SimilarityMatrix build_similarity(const std::vector<Box3D>& dets,
                                  const std::vector<Box3D>& tracks);
// Serial reference for the parallel kernel above; kept for testing and the
// kernel benchmark.
SimilarityMatrix build_similarity_serial(const std::vector<Box3D>& dets,
                                         const std::vector<Box3D>& tracks);

// Max-total-weight one-to-one assignment; matched pairs failing their branch
// gate are demoted to unmatched afterward. Deterministic.
AssignmentResult solve_gated_assignment(const SimilarityMatrix& s, const AssignmentGates& gates);

// Plain max-weight assignment on a weight matrix with a single lower gate,
// used for fusion pairing and the 2D association levels.
AssignmentResult solve_assignment(const std::vector<std::vector<double>>& weights,
                                  double min_weight);

}  // namespace fusemot
