#pragma once

#include <vector>

#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

struct Keypoint {
  Vec2 position = Vec2::Zero();  // pixels, sub-pixel
  double score = 0.0;            // [0, 1]
  std::vector<float> descriptor; // unit norm
};

struct FeatureMatch {
  Vec2 pixel_query = Vec2::Zero();
  Vec2 pixel_ref = Vec2::Zero();
  double confidence = 0.0;  // [0, 1]

  bool operator==(const FeatureMatch&) const = default;
};

struct MatchStats {
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double uniformity = 0.0;  // normalized 8x8 occupancy entropy, [0, 1]
};

struct ImageSize {
  int width = 0;
  int height = 0;

  bool contains(const Vec2& p) const {
    return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= width - 1 && p.y() <= height - 1;
  }
  bool operator==(const ImageSize&) const = default;
};

}  // namespace gsreloc
