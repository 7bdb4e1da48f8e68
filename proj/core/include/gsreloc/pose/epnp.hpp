#pragma once

#include <array>
#include <span>
#include <vector>

#include "gsreloc/pose/types.hpp"
#include "gsreloc/scene/camera.hpp"

namespace gsreloc {

// Four virtual control points and the barycentric weights expressing every
// input point as sum_j weights[i][j] * points[j].
struct ControlPointSet {
  std::array<Vec3, 4> points;
  std::vector<Eigen::Vector4d> weights;

  Vec3 reconstruct(std::size_t i) const;
  double volume() const;
};

// Centroid plus the three principal axes scaled by the per-axis RMS spread.
// Throws kDegenerate for fewer than 4 points, or collinear / coplanar sets
// (the control points must span a tetrahedron).
ControlPointSet compute_control_points(std::span<const Vec3> world_points);

inline constexpr std::size_t kEpnpMinPoints = 6;

// EPnP: camera-frame control points from the null space of the 2n x 12
// projection system (kernel sizes 1, 2, 3, each refined by 10 Gauss-Newton
// steps on the distance constraints), then the rigid transform by
// umeyama_align. Returns the lowest-reprojection-error candidate; the pose
// is camera-to-world. Errors: kInsufficientMatches (< 6), kDegenerate,
// kNoPositiveDepth.
SolverReport epnp(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam);

}  // namespace gsreloc
