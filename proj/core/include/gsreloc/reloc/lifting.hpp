#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gsreloc/features/types.hpp"
#include "gsreloc/pose/types.hpp"
#include "gsreloc/reloc/anchor_record.hpp"
#include "gsreloc/scene/camera.hpp"

namespace gsreloc {

// Bilinear depth at a sub-pixel position; nullopt outside the image or when
// a neighbour that carries weight is sky (depth 0).
std::optional<double> sample_depth(const Image& depth, const Vec2& pixel);

// Lifts the reference side of every match through the anchor depth and pose
// into world coordinates. Matches without valid depth are dropped.
std::vector<Correspondence2D3D> lift_to_3d(std::span<const FeatureMatch> matches,
                                           const AnchorRecord& anchor, const CameraIntrinsics& cam);

}  // namespace gsreloc
