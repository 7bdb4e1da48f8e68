#pragma once

#include <filesystem>
#include <vector>

#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

// One static anisotropic Gaussian in world coordinates.
struct Gaussian3D {
  Vec3 mean = Vec3::Zero();
  Quat rotation = Quat::Identity();  // (w, x, y, z), unit norm
  Vec3 scale = Vec3::Constant(0.1);  // per-axis standard deviation, meters
  double opacity = 1.0;              // (0, 1]
  Vec3 color = Vec3::Constant(0.5);  // RGB in [0, 1]

  // World-frame covariance R diag(s^2) R^T.
  Mat3 covariance() const;
};

struct SplatScene {
  std::vector<Gaussian3D> gaussians;
  Vec3 sky_color = Vec3::Zero();
};

// Throws kOutOfBounds naming `index` if any Gaussian3D invariant fails.
void validate_gaussian(const Gaussian3D& g, std::size_t index);
void validate_scene(const SplatScene& scene);

// Text format:
//   gsplat v1 <count>
//   sky <r> <g> <b>                         (optional)
//   mx my mz qw qx qy qz sx sy sz opacity r g b   (count lines)
SplatScene load_splat_file(const std::filesystem::path& path);
void save_splat_file(const std::filesystem::path& path, const SplatScene& scene);

}  // namespace gsreloc
