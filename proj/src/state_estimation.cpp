#include "fusemot/state_estimation.hpp"

#include <cmath>

namespace fusemot {

double correct_orientation(double state_yaw, double det_yaw) {
  double s = wrap_angle(state_yaw);
  double d = wrap_angle(det_yaw);
  if (std::abs(wrap_angle(d - s)) > M_PI / 2.0) s = wrap_angle(s + M_PI);
  return s;
}

Filter3D::Filter3D(const Detection3D& det, const FilterNoise& noise) : noise_(noise) {
  state_.setZero();
  state_ << det.x, det.y, det.z, wrap_angle(det.rot_y), det.l, det.w, det.h, 0, 0, 0;
  cov_.setZero();
  cov_(0, 0) = cov_(1, 1) = cov_(2, 2) = noise_.position_var;
  cov_(3, 3) = noise_.yaw_var;
  cov_(4, 4) = cov_(5, 5) = cov_(6, 6) = noise_.dims_var;
  cov_(7, 7) = cov_(8, 8) = cov_(9, 9) = noise_.velocity_var;
}

Box3D Filter3D::box() const {
  return Box3D{state_(0), state_(1), state_(2), state_(6), state_(5), state_(4), state_(3)};
}

Box3D Filter3D::predict() {
  Eigen::Matrix<double, kDim, kDim> F = Eigen::Matrix<double, kDim, kDim>::Identity();
  F(0, 7) = F(1, 8) = F(2, 9) = 1.0;
  state_ = F * state_;
  state_(3) = wrap_angle(state_(3));
  Eigen::Matrix<double, kDim, kDim> Q = Eigen::Matrix<double, kDim, kDim>::Zero();
  for (int i : {0, 1, 2, 3, 7, 8, 9}) Q(i, i) = noise_.process_var;
  for (int i : {4, 5, 6}) Q(i, i) = noise_.process_dims_var;
  cov_ = F * cov_ * F.transpose() + Q;
  cov_ = 0.5 * (cov_ + cov_.transpose());
  return box();
}

void Filter3D::update(const Detection3D& det) {
  Eigen::Matrix<double, kObs, kDim> H = Eigen::Matrix<double, kObs, kDim>::Zero();
  for (int i = 0; i < kObs; ++i) H(i, i) = 1.0;
  Eigen::Matrix<double, kObs, kObs> R =
      noise_.measurement_var * Eigen::Matrix<double, kObs, kObs>::Identity();

  state_(3) = correct_orientation(state_(3), det.rot_y);

  Eigen::Matrix<double, kObs, 1> innov;
  innov << det.x - state_(0), det.y - state_(1), det.z - state_(2),
      wrap_angle(wrap_angle(det.rot_y) - state_(3)), det.l - state_(4), det.w - state_(5),
      det.h - state_(6);

  Eigen::Matrix<double, kObs, kObs> S = H * cov_ * H.transpose() + R;
  Eigen::Matrix<double, kDim, kObs> K = cov_ * H.transpose() * S.inverse();
  state_ += K * innov;
  state_(3) = wrap_angle(state_(3));
  // Joseph form keeps the covariance symmetric positive definite.
  Eigen::Matrix<double, kDim, kDim> IKH =
      Eigen::Matrix<double, kDim, kDim>::Identity() - K * H;
  cov_ = IKH * cov_ * IKH.transpose() + K * R * K.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose());
}

Filter2D::Filter2D(const Detection2D& det, const FilterNoise& noise) : noise_(noise) {
  state_.setZero();
  state_ << det.cx(), det.cy(), det.width(), det.height(), 0, 0, 0, 0;
  cov_.setZero();
  cov_(0, 0) = cov_(1, 1) = cov_(2, 2) = cov_(3, 3) = noise_.position_var;
  cov_(4, 4) = cov_(5, 5) = cov_(6, 6) = cov_(7, 7) = noise_.velocity_var;
}

Box2D Filter2D::box() const {
  double u = state_(0), v = state_(1), w = state_(2), h = state_(3);
  return Box2D{u - w / 2, v - h / 2, u + w / 2, v + h / 2};
}

Box2D Filter2D::predict() {
  Eigen::Matrix<double, kDim, kDim> F = Eigen::Matrix<double, kDim, kDim>::Identity();
  for (int i = 0; i < kObs; ++i) F(i, i + kObs) = 1.0;
  state_ = F * state_;
  Eigen::Matrix<double, kDim, kDim> Q =
      noise_.process_var * Eigen::Matrix<double, kDim, kDim>::Identity();
  cov_ = F * cov_ * F.transpose() + Q;
  cov_ = 0.5 * (cov_ + cov_.transpose());
  return box();
}

void Filter2D::update(const Detection2D& det) {
  Eigen::Matrix<double, kObs, kDim> H = Eigen::Matrix<double, kObs, kDim>::Zero();
  for (int i = 0; i < kObs; ++i) H(i, i) = 1.0;
  Eigen::Matrix<double, kObs, kObs> R =
      noise_.measurement_var * Eigen::Matrix<double, kObs, kObs>::Identity();

  Eigen::Matrix<double, kObs, 1> innov;
  innov << det.cx() - state_(0), det.cy() - state_(1), det.width() - state_(2),
      det.height() - state_(3);

  Eigen::Matrix<double, kObs, kObs> S = H * cov_ * H.transpose() + R;
  Eigen::Matrix<double, kDim, kObs> K = cov_ * H.transpose() * S.inverse();
  state_ += K * innov;
  Eigen::Matrix<double, kDim, kDim> IKH =
      Eigen::Matrix<double, kDim, kDim>::Identity() - K * H;
  cov_ = IKH * cov_ * IKH.transpose() + K * R * K.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose());

  // Size floor: 1 px.
  for (int i : {2, 3}) {
    if (state_(i) < 1.0) {
      state_(i) = 1.0;
      ++clamp_count_;
    }
  }
}

}  // namespace fusemot
