#include "gsreloc/features/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "gsreloc/error.hpp"
#include "gsreloc/random.hpp"

namespace gsreloc {

OracleMatches oracle_match(const Pose& query_pose_gt, const AnchorRecord& anchor,
                           const SplatScene& scene, const CameraIntrinsics& cam,
                           const OracleConfig& config) {
  if (config.n <= 0 || config.pixel_noise_sigma < 0.0 || config.outlier_fraction < 0.0 ||
      config.outlier_fraction > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "oracle config out of range");
  }
  const Image& depth = anchor.depth;
  const auto stable = [&](int x, int y) {
    const float d = depth.at(x, y);
    if (!(d > 0.0f)) return false;
    if (!config.skip_depth_edges) return true;
    const int nx[4] = {x - 1, x + 1, x, x};
    const int ny[4] = {y, y, y - 1, y + 1};
    for (int k = 0; k < 4; ++k) {
      if (nx[k] < 0 || ny[k] < 0 || nx[k] >= depth.width() || ny[k] >= depth.height()) continue;
      const float dn = depth.at(nx[k], ny[k]);
      if (!(dn > 0.0f) || std::abs(dn - d) > config.occlusion_tolerance * d) return false;
    }
    return true;
  };
  const int b = std::max(config.border, 0);
  std::vector<std::size_t> valid;
  for (int y = b; y < depth.height() - b; ++y) {
    for (int x = b; x < depth.width() - b; ++x) {
      if (stable(x, y)) valid.push_back(static_cast<std::size_t>(y) * depth.width() + x);
    }
  }
  const auto n = static_cast<std::size_t>(config.n);
  if (valid.size() < n) {
    throw Error(ErrorCode::kInsufficientDepth, "oracle_match: anchor has " + std::to_string(valid.size()) +
                                                   " samplable valid-depth pixels, " + std::to_string(n) + " requested");
  }

  Rng rng(config.seed);
  // Partial Fisher-Yates: the first n entries become the sample.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.index(valid.size() - i);
    std::swap(valid[i], valid[j]);
  }

  std::optional<RenderOutput> query_render;
  if (config.occlusion_tolerance > 0.0) query_render = render(scene, query_pose_gt, cam);

  OracleMatches out;
  for (std::size_t s = 0; s < n; ++s) {
    const int x = static_cast<int>(valid[s] % static_cast<std::size_t>(depth.width()));
    const int y = static_cast<int>(valid[s] / static_cast<std::size_t>(depth.width()));
    const Vec2 ref_px(x, y);
    const Vec3 world = anchor.pose.transform(cam.back_project(ref_px, depth.at(x, y)));
    const Vec3 p_query = query_pose_gt.inverse_transform(world);
    const auto q_px = cam.project(p_query);
    if (!q_px || !cam.contains(*q_px)) continue;
    if (query_render) {
      const float d = query_render->depth.at(static_cast<int>(std::lround(q_px->x())),
                                             static_cast<int>(std::lround(q_px->y())));
      if (!(d > 0.0f) || std::abs(d - p_query.z()) > config.occlusion_tolerance * p_query.z()) continue;
    }
    out.matches.push_back({*q_px, ref_px, 1.0});
    out.world_points.push_back(world);
  }

  if (config.pixel_noise_sigma > 0.0) {
    for (FeatureMatch& m : out.matches) {
      const double nx = rng.normal(0.0, config.pixel_noise_sigma);
      const double ny = rng.normal(0.0, config.pixel_noise_sigma);
      m.pixel_query.x() = std::clamp(m.pixel_query.x() + nx, 0.0, cam.width - 1.0);
      m.pixel_query.y() = std::clamp(m.pixel_query.y() + ny, 0.0, cam.height - 1.0);
    }
  }

  out.is_outlier.assign(out.matches.size(), false);
  const auto n_out = static_cast<std::size_t>(
      std::lround(config.outlier_fraction * static_cast<double>(out.matches.size())));
  std::vector<std::size_t> order(out.matches.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < n_out; ++i) {
    const std::size_t j = i + rng.index(order.size() - i);
    std::swap(order[i], order[j]);
    FeatureMatch& m = out.matches[order[i]];
    m.pixel_query = Vec2(rng.uniform(0.0, cam.width - 1.0), rng.uniform(0.0, cam.height - 1.0));
    m.confidence = 0.0;
    out.is_outlier[order[i]] = true;
  }
  return out;
}

}  // namespace gsreloc
