#pragma once

#include <optional>

#include "gsreloc/scene/camera.hpp"
#include "gsreloc/scene/image.hpp"
#include "gsreloc/scene/splat_scene.hpp"

namespace gsreloc {

// Pixels whose accumulated opacity is below this report depth 0 and are
// treated as sky by the lifting step.
inline constexpr double kSkyOpacityThreshold = 0.5;

struct RenderConfig {
  double cov_regularization = 0.3;  // px^2 added to the cov2d diagonal
  double min_transmittance = 1e-4;  // per-pixel early termination
  double extent_sigma = 3.0;        // screen-space cutoff in standard deviations
  double sky_threshold = kSkyOpacityThreshold;
  int tile_size = 16;
};

struct ProjectedGaussian {
  Vec2 mean2d = Vec2::Zero();             // pixels
  Eigen::Matrix2d cov2d = Eigen::Matrix2d::Identity();  // pixels^2, regularized
  double z = 0.0;                         // camera-frame depth, meters
  double opacity = 0.0;
  Vec3 color = Vec3::Zero();
};

struct RenderOutput {
  Image rgb;      // H x W x 3, in [0, 1]
  Image depth;    // H x W, meters; 0 where opacity < sky threshold
  Image opacity;  // H x W, accumulated opacity in [0, 1]
};

// EWA projection of one Gaussian seen from `pose` (camera-to-world).
// Returns nullopt when the mean is at or behind the near plane or the
// extent_sigma ellipse misses the image.
std::optional<ProjectedGaussian> project_gaussian(const Gaussian3D& g, const Pose& pose,
                                                  const CameraIntrinsics& cam,
                                                  const RenderConfig& config = {});

// Front-to-back alpha compositing over a single global depth sort (by the
// Gaussian mean depth), then C = C_G + (1 - O_G) * sky. Depth is the
// opacity-weighted expected z, normalized by O_G.
RenderOutput render(const SplatScene& scene, const Pose& pose, const CameraIntrinsics& cam,
                    const RenderConfig& config = {});

}  // namespace gsreloc
