#include "gsreloc/scene/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gsreloc/error.hpp"
#include "gsreloc/random.hpp"

namespace gsreloc {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Quat random_rotation(Rng& rng) {
  Quat q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  if (q.norm() < 1e-12) return Quat::Identity();
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

}  // namespace

std::size_t count_visible(const SplatScene& scene, const Pose& pose, const CameraIntrinsics& camera) {
  std::size_t visible = 0;
  for (const Gaussian3D& g : scene.gaussians) {
    const auto px = camera.project(pose.inverse_transform(g.mean));
    if (px && camera.contains(*px)) ++visible;
  }
  return visible;
}

std::pair<SplatScene, Trajectory> generate_synthetic_scene(std::uint64_t seed,
                                                           const SyntheticConfig& config,
                                                           const CameraIntrinsics& camera) {
  if (config.n_gaussians < 1 || !(config.extent > 0.0) || !(config.trajectory_length > 0.0) ||
      !(config.anchor_spacing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic config values must be positive");
  }
  camera.validate();

  Rng rng(seed);
  SplatScene scene;
  scene.sky_color = Vec3(rng.uniform(0.5, 0.7), rng.uniform(0.7, 0.85), rng.uniform(0.85, 1.0));
  scene.gaussians.reserve(static_cast<std::size_t>(config.n_gaussians));
  const double e = config.extent;
  for (int i = 0; i < config.n_gaussians; ++i) {
    Gaussian3D g;
    g.mean = Vec3(rng.uniform(-e, e), rng.uniform(-e, e), rng.uniform(-e, e));
    g.rotation = random_rotation(rng);
    g.scale = Vec3(rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5));
    g.opacity = rng.uniform(0.5, 1.0);
    g.color = Vec3(rng.uniform(), rng.uniform(), rng.uniform());
    scene.gaussians.push_back(g);
  }

  const auto steps = static_cast<int>(std::floor(config.trajectory_length / config.anchor_spacing + 1e-9));
  const double start_x = -0.5 * steps * config.anchor_spacing;
  const double standoff_z = -1.5 * e;
  const double yaw_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double pitch_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

  Trajectory trajectory;
  for (int k = 0; k <= steps; ++k) {
    const double x = start_x + k * config.anchor_spacing;
    const double yaw = 3.0 * kDeg * std::sin(0.3 * x + yaw_phase);
    const double pitch = 2.0 * kDeg * std::sin(0.2 * x + pitch_phase);
    const Quat q = Quat(Eigen::AngleAxisd(yaw, Vec3::UnitY())) * Quat(Eigen::AngleAxisd(pitch, Vec3::UnitX()));
    const Pose pose(q, Vec3(x, 0.0, standoff_z));
    if (count_visible(scene, pose, camera) < kMinVisibleGaussians) {
      throw Error(ErrorCode::kInvalidArgument,
                  "synthetic pose " + std::to_string(k) + " sees fewer than " +
                      std::to_string(kMinVisibleGaussians) + " Gaussians; shorten the trajectory");
    }
    trajectory.push_back(k, pose);
  }
  return {std::move(scene), std::move(trajectory)};
}

}  // namespace gsreloc
