#pragma once

#include <Eigen/Dense>
#include <random>

#include "wristservo/geometry.hpp"

namespace testing_support {

using namespace wristservo;

inline Pose random_pose(std::mt19937_64& rng, double max_t = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Quaterniond q(u(rng), u(rng), u(rng), u(rng));
  const Mat3 r = q.normalized().toRotationMatrix();
  return Pose(r, Vec3(u(rng), u(rng), u(rng)) * max_t);
}

inline Eigen::Matrix4d homogeneous(const Pose& p) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = p.rotation();
  m.topRightCorner<3, 1>() = p.translation();
  return m;
}

inline Eigen::Matrix4d homogeneous(const Mat3& r, const Vec3& t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = r;
  m.topRightCorner<3, 1>() = t;
  return m;
}

inline Vec3 vee(const Mat3& w) { return {w(2, 1), w(0, 2), w(1, 0)}; }

inline Mat3 angle_axis(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace testing_support
