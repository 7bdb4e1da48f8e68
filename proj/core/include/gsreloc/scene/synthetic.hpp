#pragma once

#include <cstdint>
#include <utility>

#include "gsreloc/scene/camera.hpp"
#include "gsreloc/scene/splat_scene.hpp"
#include "gsreloc/scene/trajectory.hpp"

namespace gsreloc {

struct SyntheticConfig {
  int n_gaussians = 5000;
  // Half-size of the box holding the Gaussian means, meters.
  double extent = 10.0;
  // Length of the straight camera path, meters.
  double trajectory_length = 12.0;
  // Distance between consecutive trajectory poses (every pose is an anchor
  // candidate), meters.
  double anchor_spacing = 1.0;
};

// Random Gaussians in [-extent, extent]^3 viewed by a camera path that runs
// along +x at z = -1.5 extent, looking down +z with a few degrees of seeded
// yaw/pitch wobble. Pure function of (seed, config).
//
// Throws kInvalidArgument for non-positive config values, or when some pose
// would see fewer than 50 Gaussian centers through `camera`.
std::pair<SplatScene, Trajectory> generate_synthetic_scene(std::uint64_t seed,
                                                           const SyntheticConfig& config,
                                                           const CameraIntrinsics& camera = {});

// Number of Gaussian means inside the camera frustum (depth > near and
// projecting inside the image).
std::size_t count_visible(const SplatScene& scene, const Pose& pose, const CameraIntrinsics& camera);

// Minimum frustum-visible Gaussian count the generator guarantees per pose.
inline constexpr std::size_t kMinVisibleGaussians = 50;

}  // namespace gsreloc
