#include "gsreloc/scene/pose.hpp"

#include <cmath>

#include "gsreloc/error.hpp"

namespace gsreloc {
namespace {

Quat canonical(const Quat& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::kInvalidArgument, "pose quaternion must be finite and non-zero");
  }
  Quat out(q.coeffs() / n);
  if (out.w() < 0.0) out.coeffs() *= -1.0;
  return out;
}

}  // namespace

Pose::Pose(const Quat& rotation, const Vec3& translation)
    : rotation_(canonical(rotation)), translation_(translation) {}

Pose Pose::FromMatrix(const Mat3& rotation, const Vec3& translation) {
  return Pose(Quat(rotation), translation);
}

Pose Pose::FromAxisAngle(const Vec3& axis, double angle, const Vec3& translation) {
  return Pose(Quat(Eigen::AngleAxisd(angle, axis.normalized())), translation);
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose Pose::inverse() const {
  const Quat inv = rotation_.conjugate();
  return Pose(inv, -(inv * translation_));
}

Pose Pose::operator*(const Pose& rhs) const {
  return Pose(rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_);
}

double rotation_angle(const Quat& a, const Quat& b) {
  const Quat rel = a.conjugate() * b;
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

PoseDelta pose_delta(const Pose& a, const Pose& b) {
  return {(a.translation() - b.translation()).norm(),
          rotation_angle(a.rotation(), b.rotation())};
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

Mat3 exp_so3(const Vec3& omega) {
  const double theta = omega.norm();
  if (theta < 1e-12) return Mat3::Identity() + skew(omega);
  return Eigen::AngleAxisd(theta, omega / theta).toRotationMatrix();
}

}  // namespace gsreloc
