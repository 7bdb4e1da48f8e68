#pragma once

#include <cstdint>
#include <vector>

#include "gsreloc/features/types.hpp"
#include "gsreloc/reloc/anchor_record.hpp"
#include "gsreloc/render/rasterizer.hpp"
#include "gsreloc/scene/camera.hpp"
#include "gsreloc/scene/splat_scene.hpp"

namespace gsreloc {

struct OracleConfig {
  int n = 300;
  double pixel_noise_sigma = 0.0;
  double outlier_fraction = 0.0;
  std::uint64_t seed = 0;
  // A sample is kept only if the ground-truth query render sees it: its depth
  // in the query view must agree with the rendered depth there within this
  // relative tolerance. <= 0 disables the check (no render is done).
  double occlusion_tolerance = 0.1;
  // Anchor pixels closer than this to the image edge are not sampled, the
  // same support a detector has.
  int border = 10;
  // Skip anchor pixels on depth silhouettes: a 4-neighbour that is sky or
  // differs by more than occlusion_tolerance (relative) rules the pixel out.
  bool skip_depth_edges = true;
};

struct OracleMatches {
  std::vector<FeatureMatch> matches;
  std::vector<bool> is_outlier;   // side channel, parallel to matches
  std::vector<Vec3> world_points; // lifted anchor point behind each match
};

// Ground-truth matcher. Samples n distinct anchor pixels with valid depth
// (away from the border and from depth silhouettes),
// lifts them to world, keeps those that project inside the ground-truth
// query view (and pass the occlusion check), adds Gaussian pixel noise to
// the query side and replaces round(outlier_fraction * kept) of them with
// uniform random query pixels (confidence 0; inliers get 1).
// Throws kInsufficientDepth when the anchor has fewer than n such pixels.
OracleMatches oracle_match(const Pose& query_pose_gt, const AnchorRecord& anchor,
                           const SplatScene& scene, const CameraIntrinsics& cam,
                           const OracleConfig& config);

}  // namespace gsreloc
