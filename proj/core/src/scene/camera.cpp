#include "gsreloc/scene/camera.hpp"

#include <cmath>

#include "gsreloc/error.hpp"

namespace gsreloc {

void CameraIntrinsics::validate() const {
  const bool finite = std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) &&
                      std::isfinite(cy) && std::isfinite(near);
  if (!finite || fx <= 0.0 || fy <= 0.0 || width <= 0 || height <= 0 || near <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera intrinsics: fx, fy, width, height and near must be positive");
  }
  if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera intrinsics: principal point must lie inside the image");
  }
}

Eigen::Matrix3d CameraIntrinsics::matrix() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

std::optional<Vec2> CameraIntrinsics::project(const Vec3& p_cam) const {
  if (!(p_cam.z() > near)) return std::nullopt;
  return Vec2(fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy);
}

Vec3 CameraIntrinsics::back_project(const Vec2& pixel, double depth) const {
  return {(pixel.x() - cx) * depth / fx, (pixel.y() - cy) * depth / fy, depth};
}

CameraIntrinsics CameraIntrinsics::scaled(double factor) const {
  CameraIntrinsics out = *this;
  out.fx *= factor;
  out.fy *= factor;
  out.cx *= factor;
  out.cy *= factor;
  out.width = static_cast<int>(std::lround(width * factor));
  out.height = static_cast<int>(std::lround(height * factor));
  return out;
}

}  // namespace gsreloc
