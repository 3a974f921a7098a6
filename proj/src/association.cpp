#include "fusemot/association.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace fusemot {

PairCost cost_fused(const Box3D& det, const Box3D& track_pred) {
  double iou = iou_3d(det, track_pred);
  if (iou > 0.0) return {iou, CostBranch::Iou};
  return {normalized_distance(det, track_pred), CostBranch::Distance};
}

namespace {

SimilarityMatrix make_matrix(int rows, int cols) {
  SimilarityMatrix s;
  s.rows = rows;
  s.cols = cols;
  s.data.resize(static_cast<size_t>(rows) * cols);
  return s;
}

// Square min-cost Hungarian (Kuhn-Munkres with potentials), O(n^3).
// Returns rowsol[i] = assigned column for row i.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> rowsol(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) rowsol[p[j] - 1] = j - 1;
  return rowsol;
}

// Max-weight assignment on a rectangular matrix; weights must be >= 0.
// Rows/cols beyond min(r, c) stay unmatched via zero-weight padding.
std::vector<int> max_weight_rowsol(int rows, int cols,
                                   const std::function<double(int, int)>& weight) {
  int n = std::max(rows, cols);
  if (n == 0) return {};
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 1.0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) cost[r][c] = 1.0 - weight(r, c);
  return hungarian_min_cost(cost);
}

}  // namespace

SimilarityMatrix build_similarity_serial(const std::vector<Box3D>& dets,
                                         const std::vector<Box3D>& tracks) {
  SimilarityMatrix s = make_matrix(static_cast<int>(dets.size()), static_cast<int>(tracks.size()));
  for (int r = 0; r < s.rows; ++r)
    for (int c = 0; c < s.cols; ++c) s.at(r, c) = cost_fused(dets[r], tracks[c]);
  return s;
}

SimilarityMatrix build_similarity(const std::vector<Box3D>& dets,
                                  const std::vector<Box3D>& tracks) {
  SimilarityMatrix s = make_matrix(static_cast<int>(dets.size()), static_cast<int>(tracks.size()));
  const int total = s.rows * s.cols;
#pragma omp parallel for schedule(static) if (total > 256)
  for (int idx = 0; idx < total; ++idx) {
    int r = idx / s.cols, c = idx % s.cols;
    s.data[idx] = cost_fused(dets[r], tracks[c]);
  }
  return s;
}

AssignmentResult solve_gated_assignment(const SimilarityMatrix& s, const AssignmentGates& gates) {
  AssignmentResult res;
  auto rowsol = max_weight_rowsol(s.rows, s.cols, [&](int r, int c) { return s.at(r, c).score; });
  std::vector<char> col_matched(s.cols, 0);
  // Distance branch gate expressed on the score: 1/(1+d) >= 1/(1+dmax).
  const double dist_score_min = 1.0 / (1.0 + gates.dist_max_m);
  for (int r = 0; r < s.rows; ++r) {
    int c = r < static_cast<int>(rowsol.size()) ? rowsol[r] : -1;
    bool ok = false;
    if (c >= 0 && c < s.cols) {
      const PairCost& pc = s.at(r, c);
      ok = pc.branch == CostBranch::Iou ? pc.score >= gates.iou_min
                                        : pc.score >= dist_score_min;
    }
    if (ok) {
      res.matches.emplace_back(r, c);
      col_matched[c] = 1;
    } else {
      res.unmatched_rows.push_back(r);
    }
  }
  for (int c = 0; c < s.cols; ++c)
    if (!col_matched[c]) res.unmatched_cols.push_back(c);
  std::sort(res.matches.begin(), res.matches.end());
  return res;
}

AssignmentResult solve_assignment(const std::vector<std::vector<double>>& weights,
                                  double min_weight) {
  AssignmentResult res;
  int rows = static_cast<int>(weights.size());
  int cols = rows > 0 ? static_cast<int>(weights[0].size()) : 0;
  auto rowsol = max_weight_rowsol(rows, cols, [&](int r, int c) { return weights[r][c]; });
  std::vector<char> col_matched(cols, 0);
  for (int r = 0; r < rows; ++r) {
    int c = r < static_cast<int>(rowsol.size()) ? rowsol[r] : -1;
    if (c >= 0 && c < cols && weights[r][c] >= min_weight && weights[r][c] > 0.0) {
      res.matches.emplace_back(r, c);
      col_matched[c] = 1;
    } else {
      res.unmatched_rows.push_back(r);
    }
  }
  for (int c = 0; c < cols; ++c)
    if (!col_matched[c]) res.unmatched_cols.push_back(c);
  std::sort(res.matches.begin(), res.matches.end());
  return res;
}

}  // namespace fusemot
