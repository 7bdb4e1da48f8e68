#include "gsreloc/render/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

namespace gsreloc {
namespace {

struct Splat {
  ProjectedGaussian g;
  double conic_a, conic_b, conic_c;  // inverse covariance
  int x0, y0, x1, y1;                // inclusive pixel bounding box
};

// Total order on projected splats so the composite does not depend on the
// input order of the scene list.
bool splat_less(const Splat& a, const Splat& b) {
  const auto key = [](const Splat& s) {
    return std::tie(s.g.z, s.g.mean2d.x(), s.g.mean2d.y(), s.g.opacity, s.g.color.x(),
                    s.g.color.y(), s.g.color.z(), s.g.cov2d(0, 0), s.g.cov2d(0, 1),
                    s.g.cov2d(1, 1));
  };
  return key(a) < key(b);
}

}  // namespace

std::optional<ProjectedGaussian> project_gaussian(const Gaussian3D& g, const Pose& pose,
                                                  const CameraIntrinsics& cam,
                                                  const RenderConfig& config) {
  const Mat3 r_cw = pose.rotation_matrix().transpose();
  const Vec3 p = r_cw * (g.mean - pose.translation());
  if (!(p.z() > cam.near)) return std::nullopt;

  const double inv_z = 1.0 / p.z();
  Eigen::Matrix<double, 2, 3> j;
  j << cam.fx * inv_z, 0.0, -cam.fx * p.x() * inv_z * inv_z,
       0.0, cam.fy * inv_z, -cam.fy * p.y() * inv_z * inv_z;
  const Mat3 cov_cam = r_cw * g.covariance() * r_cw.transpose();

  ProjectedGaussian out;
  out.cov2d = j * cov_cam * j.transpose();
  out.cov2d(0, 1) = out.cov2d(1, 0) = 0.5 * (out.cov2d(0, 1) + out.cov2d(1, 0));
  out.cov2d.diagonal().array() += config.cov_regularization;
  out.mean2d = Vec2(cam.fx * p.x() * inv_z + cam.cx, cam.fy * p.y() * inv_z + cam.cy);
  out.z = p.z();
  out.opacity = g.opacity;
  out.color = g.color;

  const double rx = config.extent_sigma * std::sqrt(out.cov2d(0, 0));
  const double ry = config.extent_sigma * std::sqrt(out.cov2d(1, 1));
  if (out.mean2d.x() + rx < 0.0 || out.mean2d.x() - rx > cam.width - 1 ||
      out.mean2d.y() + ry < 0.0 || out.mean2d.y() - ry > cam.height - 1) {
    return std::nullopt;
  }
  return out;
}

RenderOutput render(const SplatScene& scene, const Pose& pose, const CameraIntrinsics& cam,
                    const RenderConfig& config) {
  cam.validate();
  const int width = cam.width;
  const int height = cam.height;

  std::vector<Splat> splats;
  splats.reserve(scene.gaussians.size());
  for (const Gaussian3D& g : scene.gaussians) {
    const auto projected = project_gaussian(g, pose, cam, config);
    if (!projected) continue;
    Splat s{*projected, 0, 0, 0, 0, 0, 0, 0};
    const Eigen::Matrix2d& c = s.g.cov2d;
    const double det = c(0, 0) * c(1, 1) - c(0, 1) * c(0, 1);
    if (!(det > 0.0)) continue;
    s.conic_a = c(1, 1) / det;
    s.conic_b = -c(0, 1) / det;
    s.conic_c = c(0, 0) / det;
    const double rx = config.extent_sigma * std::sqrt(c(0, 0));
    const double ry = config.extent_sigma * std::sqrt(c(1, 1));
    s.x0 = std::max(0, static_cast<int>(std::ceil(s.g.mean2d.x() - rx)));
    s.x1 = std::min(width - 1, static_cast<int>(std::floor(s.g.mean2d.x() + rx)));
    s.y0 = std::max(0, static_cast<int>(std::ceil(s.g.mean2d.y() - ry)));
    s.y1 = std::min(height - 1, static_cast<int>(std::floor(s.g.mean2d.y() + ry)));
    if (s.x0 > s.x1 || s.y0 > s.y1) continue;
    splats.push_back(s);
  }
  std::sort(splats.begin(), splats.end(), splat_less);

  // Bin splats into screen tiles; each tile list inherits the global order.
  const int tile = std::max(1, config.tile_size);
  const int tiles_x = (width + tile - 1) / tile;
  const int tiles_y = (height + tile - 1) / tile;
  std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (std::uint32_t i = 0; i < splats.size(); ++i) {
    const Splat& s = splats[i];
    for (int ty = s.y0 / tile; ty <= s.y1 / tile; ++ty) {
      for (int tx = s.x0 / tile; tx <= s.x1 / tile; ++tx) {
        bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(i);
      }
    }
  }

  RenderOutput out{Image(width, height, 3), Image(width, height, 1), Image(width, height, 1)};
  const double cutoff = config.extent_sigma * config.extent_sigma;

  // Tiles are independent; the per-pixel result only depends on the tile's
  // ordered list, so any tile schedule produces the same image.
  for (int ty = 0; ty < tiles_y; ++ty) {
    for (int tx = 0; tx < tiles_x; ++tx) {
      const auto& bin = bins[static_cast<std::size_t>(ty) * tiles_x + tx];
      const int px_end = std::min(width, (tx + 1) * tile);
      const int py_end = std::min(height, (ty + 1) * tile);
      for (int y = ty * tile; y < py_end; ++y) {
        for (int x = tx * tile; x < px_end; ++x) {
          double transmittance = 1.0;
          Vec3 color = Vec3::Zero();
          double depth_acc = 0.0;
          for (const std::uint32_t idx : bin) {
            const Splat& s = splats[idx];
            if (x < s.x0 || x > s.x1 || y < s.y0 || y > s.y1) continue;
            const double dx = x - s.g.mean2d.x();
            const double dy = y - s.g.mean2d.y();
            const double maha = s.conic_a * dx * dx + 2.0 * s.conic_b * dx * dy + s.conic_c * dy * dy;
            if (maha > cutoff) continue;
            const double alpha = std::min(1.0, s.g.opacity * std::exp(-0.5 * maha));
            if (alpha <= 0.0) continue;
            const double weight = alpha * transmittance;
            color += weight * s.g.color;
            depth_acc += weight * s.g.z;
            transmittance *= 1.0 - alpha;
            if (transmittance < config.min_transmittance) break;
          }
          const double opacity = 1.0 - transmittance;
          const Vec3 rgb = color + transmittance * scene.sky_color;
          for (int c = 0; c < 3; ++c) {
            out.rgb.at(x, y, c) = static_cast<float>(std::clamp(rgb[c], 0.0, 1.0));
          }
          const auto stored_opacity = static_cast<float>(std::clamp(opacity, 0.0, 1.0));
          out.opacity.at(x, y) = stored_opacity;
          out.depth.at(x, y) = stored_opacity >= config.sky_threshold
                                   ? static_cast<float>(depth_acc / opacity)
                                   : 0.0f;
        }
      }
    }
  }
  return out;
}

}  // namespace gsreloc
