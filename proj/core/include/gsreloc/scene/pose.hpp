#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gsreloc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// Rigid transform stored camera-to-world: transform(p_cam) yields p_world.
// The quaternion is normalized and canonicalized to w >= 0 on construction,
// so two poses describing the same rotation compare equal component-wise.
class Pose {
 public:
  Pose() : rotation_(Quat::Identity()), translation_(Vec3::Zero()) {}
  Pose(const Quat& rotation, const Vec3& translation);

  static Pose Identity() { return {}; }
  static Pose FromMatrix(const Mat3& rotation, const Vec3& translation);
  // Rotation of `angle` radians about `axis` (need not be unit length).
  static Pose FromAxisAngle(const Vec3& axis, double angle,
                            const Vec3& translation = Vec3::Zero());

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }
  Eigen::Matrix4d matrix() const;

  Vec3 transform(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 inverse_transform(const Vec3& p) const {
    return rotation_.conjugate() * (p - translation_);
  }

  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;

 private:
  Quat rotation_;
  Vec3 translation_;
};

struct PoseDelta {
  double translation = 0.0;  // meters
  double rotation = 0.0;     // radians, in [0, pi]
};

PoseDelta pose_delta(const Pose& a, const Pose& b);

// Geodesic angle of the relative rotation a^-1 b, in [0, pi].
double rotation_angle(const Quat& a, const Quat& b);

Mat3 skew(const Vec3& v);
// SO(3) exponential map.
Mat3 exp_so3(const Vec3& omega);

}  // namespace gsreloc
