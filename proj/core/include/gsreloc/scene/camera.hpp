#pragma once

#include <optional>

#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

// Pinhole intrinsics. Pixel (x, y) has its center at integer coordinates
// (x, y); a point lies inside the image when 0 <= u <= width-1 and
// 0 <= v <= height-1.
struct CameraIntrinsics {
  double fx = 300.0;
  double fy = 300.0;
  double cx = 160.0;
  double cy = 120.0;
  int width = 320;
  int height = 240;
  double near = 0.1;

  // Throws kInvalidArgument when an invariant does not hold.
  void validate() const;

  bool contains(const Vec2& pixel) const {
    return pixel.x() >= 0.0 && pixel.y() >= 0.0 && pixel.x() <= width - 1 &&
           pixel.y() <= height - 1;
  }

  Eigen::Matrix3d matrix() const;

  // Projects a camera-frame point; nullopt when depth <= near.
  std::optional<Vec2> project(const Vec3& p_cam) const;
  Vec3 back_project(const Vec2& pixel, double depth) const;

  // Same intrinsics resampled by `factor` (scales focal lengths, principal
  // point and image size).
  CameraIntrinsics scaled(double factor) const;

  bool operator==(const CameraIntrinsics&) const = default;
};

}  // namespace gsreloc
