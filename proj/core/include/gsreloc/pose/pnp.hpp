#pragma once

#include <cstdint>
#include <span>

#include "gsreloc/pose/bundle_adjustment.hpp"
#include "gsreloc/pose/types.hpp"
#include "gsreloc/scene/camera.hpp"

namespace gsreloc {

struct RansacConfig {
  int iters = 256;
  double threshold_px = 3.0;
  int min_inliers = 6;
  std::uint64_t seed = 0;
  // Early exit once the probability of having drawn an all-inlier sample
  // reaches this value.
  double confidence = 0.9999;
};

struct PnpConfig {
  RansacConfig ransac;
  BaConfig ba;
};

// Pixel reprojection error of one correspondence, or +inf when the point is
// not in front of the camera.
double reprojection_error(const Correspondence2D3D& c, const CameraIntrinsics& cam, const Pose& pose);

// RANSAC over minimal 6-point EPnP hypotheses followed by EPnP on the
// consensus set and refine_ba. The input is put in a canonical order first,
// so the result does not depend on correspondence order. Throws
// kInsufficientMatches (< 6) or kNoConsensus.
SolverReport solve_pnp(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam,
                       const PnpConfig& config = {});

}  // namespace gsreloc
