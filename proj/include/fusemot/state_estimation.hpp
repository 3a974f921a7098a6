#pragma once

#include <Eigen/Dense>

#include "fusemot/geometry.hpp"
#include "fusemot/types.hpp"

namespace fusemot {

// Noise priors for the constant-velocity filters. Units are per-frame.
struct FilterNoise {
  double position_var = 1.0;
  double yaw_var = 0.1;
  double dims_var = 0.01;
  double velocity_var = 100.0;
  double process_var = 0.01;      // kinematic terms (position, yaw, velocity)
  double process_dims_var = 1e-4;
  double measurement_var = 0.1;
};

// Constant-velocity 3D filter, state (x, y, z, yaw, l, w, h, vx, vy, vz).
class Filter3D {
 public:
  static constexpr int kDim = 10;
  static constexpr int kObs = 7;

  Filter3D(const Detection3D& det, const FilterNoise& noise = {});

  // Advances the state one frame; call exactly once per frame.
  Box3D predict();
  void update(const Detection3D& det);

  Box3D box() const;
  const Eigen::Matrix<double, kDim, kDim>& covariance() const { return cov_; }
  const Eigen::Matrix<double, kDim, 1>& state() const { return state_; }

 private:
  Eigen::Matrix<double, kDim, 1> state_;
  Eigen::Matrix<double, kDim, kDim> cov_;
  FilterNoise noise_;
};

// Constant-velocity 2D filter, state (u, v, w, h, vu, vv, vw, vh) in pixels.
class Filter2D {
 public:
  static constexpr int kDim = 8;
  static constexpr int kObs = 4;

  Filter2D(const Detection2D& det, const FilterNoise& noise = {});

  Box2D predict();
  void update(const Detection2D& det);

  Box2D box() const;
  const Eigen::Matrix<double, kDim, kDim>& covariance() const { return cov_; }
  int clamp_count() const { return clamp_count_; }

 private:
  Eigen::Matrix<double, kDim, 1> state_;
  Eigen::Matrix<double, kDim, kDim> cov_;
  FilterNoise noise_;
  int clamp_count_ = 0;
};

// Cuboid-flip correction: returns the state yaw adjusted so the innovation
// against det_yaw is acute (within [-pi/2, pi/2] after wrapping).
double correct_orientation(double state_yaw, double det_yaw);

}  // namespace fusemot
