#pragma once

#include <vector>

#include "gsreloc/features/types.hpp"
#include "gsreloc/scene/image.hpp"

namespace gsreloc {

// Multi-scale Harris detector with a 128-dim gradient-histogram descriptor
// (4x4 spatial cells x 8 orientations over a 16x16 upright patch,
// L2-normalized, clipped at 0.2 and renormalized).
struct DetectorConfig {
  int max_keypoints = 2048;
  double harris_k = 0.04;
  std::vector<double> scales = {1.0, 2.0};  // derivative smoothing sigmas
  double relative_threshold = 0.01;         // fraction of the strongest response
  double absolute_threshold = 1e-8;
  int nms_radius = 3;
  int border = 10;  // keeps the descriptor patch inside the image
};

inline constexpr int kDescriptorSize = 128;
inline constexpr int kMinDetectImageSize = 32;

// Keypoints sorted by descending score (ties by raster position). Throws
// kInvalidArgument when min(width, height) < 32.
std::vector<Keypoint> detect_and_describe(const Image& image, const DetectorConfig& config = {});

}  // namespace gsreloc
