#include "gsreloc/reloc/lifting.hpp"

#include <cmath>

namespace gsreloc {

std::optional<double> sample_depth(const Image& depth, const Vec2& pixel) {
  const double u = pixel.x();
  const double v = pixel.y();
  if (!(u >= 0.0 && v >= 0.0 && u <= depth.width() - 1 && v <= depth.height() - 1)) return std::nullopt;
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const double fx = u - x0;
  const double fy = v - y0;
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  double sum = 0.0;
  for (int dy = 0; dy < 2; ++dy) {
    for (int dx = 0; dx < 2; ++dx) {
      const double w = wx[dx] * wy[dy];
      if (w == 0.0) continue;  // also keeps x0 + 1 inside on the last column
      const float d = depth.at(x0 + dx, y0 + dy);
      if (!(d > 0.0f)) return std::nullopt;
      sum += w * d;
    }
  }
  return sum;
}

std::vector<Correspondence2D3D> lift_to_3d(std::span<const FeatureMatch> matches,
                                           const AnchorRecord& anchor, const CameraIntrinsics& cam) {
  std::vector<Correspondence2D3D> out;
  out.reserve(matches.size());
  for (const FeatureMatch& m : matches) {
    const auto d = sample_depth(anchor.depth, m.pixel_ref);
    if (!d) continue;
    out.push_back({m.pixel_query, anchor.pose.transform(cam.back_project(m.pixel_ref, *d))});
  }
  return out;
}

}  // namespace gsreloc
