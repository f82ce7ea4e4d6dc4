#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <span>
#include <vector>

namespace wristservo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

Mat3 skew(const Vec3& v);
Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);
Mat3 axis_angle(const Vec3& axis, double angle);

/// Closest rotation to `m` in the Frobenius sense (polar decomposition).
Mat3 orthonormalize(const Mat3& m);

/// Rigid transform T_{a,b}: maps coordinates expressed in frame b into frame a.
///
/// The rotation is kept as a 3x3 matrix. `Pose(R, t)` validates orthonormality
/// (1e-9); operations that cannot leave SO(3) build results through
/// `Pose::unchecked`.
class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return {}; }
  static Pose unchecked(const Mat3& rotation, const Vec3& translation);
  static Pose from_translation(const Vec3& t) { return unchecked(Mat3::Identity(), t); }
  static Pose from_rotation(const Mat3& r) { return Pose(r, Vec3::Zero()); }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 transform_point(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 transform_vector(const Vec3& v) const { return rotation_ * v; }

  Eigen::Matrix4d matrix() const;

  /// Re-projects the rotation onto SO(3).
  Pose orthonormalized() const { return unchecked(orthonormalize(rotation_), translation_); }

  /// max(|RᵀR - I|, |det R - 1|).
  double orthonormality_error() const;

  bool is_approx(const Pose& other, double tol) const;

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& p);
inline Pose operator*(const Pose& a, const Pose& b) { return compose(a, b); }

/// Linear velocity first, angular second.
struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  Vec6 stacked() const {
    Vec6 v;
    v << linear, angular;
    return v;
  }
  static Twist from_stacked(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
};

/// Spatial motion transform [[R, [t]x R], [0, R]] carrying twists from frame b to frame a.
struct VelocityTransform {
  Mat6 matrix = Mat6::Identity();

  Twist apply(const Twist& t) const { return Twist::from_stacked(matrix * t.stacked()); }
};

VelocityTransform velocity_transform(const Pose& a_from_b);

/// Starting from T_{c^1,o} and displacements T_{c^i,c^{i+1}}, returns T_{c^k,o}
/// for every frame k; element 0 is `initial`.
std::vector<Pose> chain_displacements(const Pose& initial, std::span<const Pose> displacements);

/// One link of the chain: T_{c^{k+1},o} = T_{c^k,c^{k+1}}^{-1} T_{c^k,o}, re-orthonormalized.
Pose chain_step(const Pose& previous, const Pose& displacement);

/// Moore-Penrose pseudo-inverse through the SVD. Singular values below
/// `relative_tolerance * sigma_max` are truncated. A positive `damping` switches
/// to damped least squares: sigma / (sigma^2 + damping^2).
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double relative_tolerance = 1e-10,
                               double damping = 0.0);

}  // namespace wristservo
