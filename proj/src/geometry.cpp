#include "wristservo/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "wristservo/errors.hpp"

namespace wristservo {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat3 rot_x(double angle) { return Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix(); }
Mat3 rot_y(double angle) { return Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double angle) { return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix(); }

Mat3 axis_angle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

namespace {

double rotation_error(const Mat3& r) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(r.determinant() - 1.0));
}

}  // namespace

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw InvalidArgument("pose has non-finite entries");
  }
  if (rotation_error(rotation) > 1e-9) {
    throw InvalidArgument("pose rotation is not orthonormal with det +1");
  }
}

Pose Pose::unchecked(const Mat3& rotation, const Vec3& translation) {
  Pose p;
  p.rotation_ = rotation;
  p.translation_ = translation;
  return p;
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

double Pose::orthonormality_error() const { return rotation_error(rotation_); }

bool Pose::is_approx(const Pose& other, double tol) const {
  return (rotation_ - other.rotation_).cwiseAbs().maxCoeff() <= tol &&
         (translation_ - other.translation_).cwiseAbs().maxCoeff() <= tol;
}

Pose compose(const Pose& a, const Pose& b) {
  return Pose::unchecked(a.rotation() * b.rotation(),
                         a.rotation() * b.translation() + a.translation());
}

Pose inverse(const Pose& p) {
  const Mat3 rt = p.rotation().transpose();
  return Pose::unchecked(rt, -(rt * p.translation()));
}

VelocityTransform velocity_transform(const Pose& a_from_b) {
  const Mat3& r = a_from_b.rotation();
  VelocityTransform v;
  v.matrix.setZero();
  v.matrix.topLeftCorner<3, 3>() = r;
  v.matrix.topRightCorner<3, 3>() = skew(a_from_b.translation()) * r;
  v.matrix.bottomRightCorner<3, 3>() = r;
  return v;
}

Pose chain_step(const Pose& previous, const Pose& displacement) {
  return compose(inverse(displacement), previous).orthonormalized();
}

std::vector<Pose> chain_displacements(const Pose& initial, std::span<const Pose> displacements) {
  std::vector<Pose> out;
  out.reserve(displacements.size() + 1);
  out.push_back(initial);
  for (const Pose& d : displacements) out.push_back(chain_step(out.back(), d));
  return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double relative_tolerance,
                               double damping) {
  if (m.size() == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = relative_tolerance * (sigma.size() > 0 ? sigma(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = sigma(i);
    if (s <= cutoff || s == 0.0) continue;
    inv(i) = damping > 0.0 ? s / (s * s + damping * damping) : 1.0 / s;
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace wristservo
