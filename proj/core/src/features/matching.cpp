#include "gsreloc/features/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsreloc/error.hpp"

namespace gsreloc {
namespace {

struct Nearest {
  std::size_t best = 0;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();

  void offer(std::size_t index, double d) {
    if (d < d1) {
      d2 = d1;
      d1 = d;
      best = index;
    } else if (d < d2) {
      d2 = d;
    }
  }
  double ratio() const {
    if (!std::isfinite(d2)) return 0.0;
    if (d2 <= 0.0) return 1.0;
    return d1 / d2;
  }
};

// Sum order is fixed and termwise symmetric, so dist(a, b) == dist(b, a)
// bit for bit.
double descriptor_distance(const std::vector<float>& a, const std::vector<float>& b) {
  double acc = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double d = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

std::vector<FeatureMatch> match_features(std::span<const Keypoint> kps_query,
                                         std::span<const Keypoint> kps_ref,
                                         const MatcherConfig& config) {
  if (kps_query.empty() || kps_ref.empty()) {
    throw Error(ErrorCode::kInsufficientMatches, "match_features: keypoint list is empty");
  }
  std::vector<Nearest> fwd(kps_query.size());
  std::vector<Nearest> bwd(kps_ref.size());
  for (std::size_t i = 0; i < kps_query.size(); ++i) {
    for (std::size_t j = 0; j < kps_ref.size(); ++j) {
      const double d = descriptor_distance(kps_query[i].descriptor, kps_ref[j].descriptor);
      fwd[i].offer(j, d);
      bwd[j].offer(i, d);
    }
  }

  std::vector<FeatureMatch> matches;
  for (std::size_t i = 0; i < kps_query.size(); ++i) {
    const std::size_t j = fwd[i].best;
    if (config.mutual && bwd[j].best != i) continue;
    const double ratio = std::max(fwd[i].ratio(), bwd[j].ratio());
    if (!(ratio < config.ratio)) continue;
    matches.push_back({kps_query[i].position, kps_ref[j].position, std::clamp(1.0 - ratio, 0.0, 1.0)});
  }
  return matches;
}

MatchStats match_stats(std::span<const FeatureMatch> matches, const ImageSize& query_size) {
  MatchStats stats;
  if (matches.empty()) return stats;
  stats.count = matches.size();

  double conf = 0.0;
  std::vector<std::size_t> cells(kUniformityGrid * kUniformityGrid, 0);
  const double w = std::max(1, query_size.width);
  const double h = std::max(1, query_size.height);
  for (const FeatureMatch& m : matches) {
    conf += m.confidence;
    const int cx = std::clamp(static_cast<int>(std::floor(m.pixel_query.x() / w * kUniformityGrid)), 0,
                              kUniformityGrid - 1);
    const int cy = std::clamp(static_cast<int>(std::floor(m.pixel_query.y() / h * kUniformityGrid)), 0,
                              kUniformityGrid - 1);
    ++cells[static_cast<std::size_t>(cy) * kUniformityGrid + cx];
  }
  stats.mean_confidence = conf / static_cast<double>(matches.size());

  double entropy = 0.0;
  for (std::size_t c : cells) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(matches.size());
    entropy -= p * std::log(p);
  }
  stats.uniformity = std::clamp(entropy / std::log(static_cast<double>(cells.size())), 0.0, 1.0);
  return stats;
}

}  // namespace gsreloc
