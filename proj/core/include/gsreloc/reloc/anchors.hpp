#pragma once

#include <vector>

#include "gsreloc/reloc/anchor_record.hpp"
#include "gsreloc/render/rasterizer.hpp"
#include "gsreloc/scene/camera.hpp"
#include "gsreloc/scene/splat_scene.hpp"
#include "gsreloc/scene/trajectory.hpp"

namespace gsreloc {

struct AnchorDatabase {
  CameraIntrinsics camera;
  std::vector<AnchorRecord> anchors;
  double spacing = 3.0;  // meters
};

inline constexpr double kDefaultAnchorSpacing = 3.0;
inline constexpr int kThumbnailSize = 8;
inline constexpr int kOrientationBins = 128;
inline constexpr int kGlobalDescriptorSize = kThumbnailSize * kThumbnailSize + kOrientationBins;

// Greedy subsampling: the first pose, then every pose at least `spacing`
// from the previous anchor. Anchor ids are the trajectory indices. The rgb
// render is stored 8-bit quantized so it survives a PPM round trip.
// Throws kInvalidArgument (spacing <= 0) or kTrajectoryTooShort.
AnchorDatabase build_anchor_db(const SplatScene& scene, const Trajectory& trajectory,
                               const CameraIntrinsics& cam, double spacing,
                               const RenderConfig& render_config = {});

// 8x8 zero-mean grayscale thumbnail (Gaussian-weighted, one cell wide)
// followed by a 128-bin gradient orientation histogram weighted by
// magnitude. Each part is L2-normalized and the concatenation is scaled to
// unit norm.
GlobalDescriptor global_descriptor(const Image& image);

double cosine_similarity(const GlobalDescriptor& a, const GlobalDescriptor& b);

// Highest cosine similarity, ties to the lowest id. Throws kEmptyDatabase.
const AnchorRecord& retrieve(const Image& query, const AnchorDatabase& db);

}  // namespace gsreloc
