#pragma once

#include <span>
#include <vector>

#include "gsreloc/features/types.hpp"

namespace gsreloc {

struct MatcherConfig {
  double ratio = 0.8;
  bool mutual = true;
};

// Mutual nearest neighbour + ratio test applied in both directions, so
// match_features(a, b) and match_features(b, a) yield the same pairs.
// confidence = 1 - max(ratio_a, ratio_b), clamped to [0, 1]. Output is
// ordered by query keypoint index. Throws kInsufficientMatches when either
// list is empty.
std::vector<FeatureMatch> match_features(std::span<const Keypoint> kps_query,
                                         std::span<const Keypoint> kps_ref,
                                         const MatcherConfig& config = {});

// count, arithmetic mean confidence, and normalized entropy of the query
// pixel occupancy over an 8x8 grid of `query_size`.
MatchStats match_stats(std::span<const FeatureMatch> matches, const ImageSize& query_size);

inline constexpr int kUniformityGrid = 8;

}  // namespace gsreloc
