#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gsreloc/random.hpp"
#include "gsreloc/render/rasterizer.hpp"
#include "gsreloc/scene/synthetic.hpp"
#include "support/scenario.hpp"

namespace gsreloc {
namespace {

Gaussian3D isotropic(const Vec3& mean, double s, double opacity, const Vec3& color = Vec3(0.8, 0.2, 0.1)) {
  Gaussian3D g;
  g.mean = mean;
  g.scale = Vec3::Constant(s);
  g.opacity = opacity;
  g.color = color;
  return g;
}

SplatScene random_scene(std::uint64_t seed, int n) {
  auto [scene, traj] = generate_synthetic_scene(seed, {});
  scene.gaussians.resize(static_cast<std::size_t>(n));
  return scene;
}

Pose synthetic_view(std::uint64_t seed) { return generate_synthetic_scene(seed, {}).second[3].pose; }

std::pair<int, int> argmax(const Image& img) {
  int bx = 0, by = 0;
  float best = -1.0f;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y) > best) {
        best = img.at(x, y);
        bx = x;
        by = y;
      }
    }
  }
  return {bx, by};
}

TEST(ProjectGaussian, OnAxisMean) {
  CameraIntrinsics cam;
  cam.fx = cam.fy = 100;
  const auto p = project_gaussian(isotropic(Vec3(0, 0, 5), 0.1, 0.9), Pose(), cam);
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR(p->mean2d.x(), 160.0, 1e-12);
  EXPECT_NEAR(p->mean2d.y(), 120.0, 1e-12);
  EXPECT_NEAR(p->z, 5.0, 1e-12);
}

TEST(ProjectGaussian, CovarianceMatchesMonteCarlo) {
  CameraIntrinsics cam;
  cam.fx = cam.fy = 100;
  const Gaussian3D g = isotropic(Vec3(0, 0, 5), 0.2, 0.9);
  const auto p = project_gaussian(g, Pose(), cam);
  ASSERT_TRUE(p.has_value());

  Rng rng(42);
  const int n = 100000;
  Vec2 mean = Vec2::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3 x = g.mean + g.scale.cwiseProduct(Vec3(rng.normal(), rng.normal(), rng.normal()));
    const Vec2 u(cam.fx * x.x() / x.z() + cam.cx, cam.fy * x.y() / x.z() + cam.cy);
    mean += u;
    second += u * u.transpose();
  }
  mean /= n;
  const Eigen::Matrix2d cov = second / n - mean * mean.transpose();
  EXPECT_NEAR(cov(0, 0), 16.0, 0.05 * 16.0);
  EXPECT_NEAR(cov(1, 1), 16.0, 0.05 * 16.0);
  EXPECT_NEAR(p->cov2d(0, 0), cov(0, 0), 0.05 * cov(0, 0));
  EXPECT_NEAR(p->cov2d(1, 1), cov(1, 1), 0.05 * cov(1, 1));
  EXPECT_NEAR(p->cov2d(0, 1), cov(0, 1), 0.05 * 16.0);
}

TEST(ProjectGaussian, AnisotropicMatchesMonteCarloOffAxis) {
  const CameraIntrinsics cam;
  Gaussian3D g = isotropic(Vec3(1.0, -0.5, 6.0), 0.1, 0.9);
  g.scale = Vec3(0.3, 0.05, 0.15);
  g.rotation = Quat(Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()));
  const Pose pose = Pose::FromAxisAngle(Vec3(0, 1, 0), 0.1, Vec3(0.2, 0.1, -0.3));
  const auto p = project_gaussian(g, pose, cam);
  ASSERT_TRUE(p.has_value());

  Rng rng(43);
  const Mat3 r = g.rotation.toRotationMatrix();
  const int n = 100000;
  Vec2 mean = Vec2::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3 x = g.mean + r * g.scale.cwiseProduct(Vec3(rng.normal(), rng.normal(), rng.normal()));
    const Vec3 c = pose.inverse_transform(x);
    const Vec2 u(cam.fx * c.x() / c.z() + cam.cx, cam.fy * c.y() / c.z() + cam.cy);
    mean += u;
    second += u * u.transpose();
  }
  mean /= n;
  const Eigen::Matrix2d cov = second / n - mean * mean.transpose();
  const double scale = cov.trace();
  EXPECT_LT((p->cov2d - cov).cwiseAbs().maxCoeff(), 0.05 * scale);
}

TEST(ProjectGaussian, CovarianceIsSymmetricPositiveDefinite) {
  const SplatScene scene = random_scene(3, 2000);
  const Pose pose = synthetic_view(3);
  const CameraIntrinsics cam;
  int projected = 0;
  for (const Gaussian3D& g : scene.gaussians) {
    const auto p = project_gaussian(g, pose, cam);
    if (!p) continue;
    ++projected;
    EXPECT_NEAR(p->cov2d(0, 1), p->cov2d(1, 0), 1e-9);
    EXPECT_GT(p->cov2d.determinant(), 0.0);
    EXPECT_GT(p->cov2d(0, 0), 0.0);
    EXPECT_GT(p->z, cam.near);
  }
  EXPECT_GT(projected, 100);
}

TEST(ProjectGaussian, CullsBehindAndOffscreen) {
  const CameraIntrinsics cam;
  EXPECT_FALSE(project_gaussian(isotropic(Vec3(0, 0, -1), 0.1, 0.9), Pose(), cam).has_value());
  EXPECT_FALSE(project_gaussian(isotropic(Vec3(0, 0, 0.05), 0.1, 0.9), Pose(), cam).has_value());
  EXPECT_FALSE(project_gaussian(isotropic(Vec3(100, 0, 5), 0.1, 0.9), Pose(), cam).has_value());
  // Center off-screen but the 3-sigma footprint reaches in.
  EXPECT_TRUE(project_gaussian(isotropic(Vec3(-2.75, 0, 5), 0.2, 0.9), Pose(), cam).has_value());
}

TEST(Render, EmptySceneIsSky) {
  SplatScene scene;
  scene.sky_color = Vec3(0.25, 0.5, 0.75);
  const RenderOutput r = render(scene, Pose(), CameraIntrinsics{});
  for (int y = 0; y < r.rgb.height(); ++y) {
    for (int x = 0; x < r.rgb.width(); ++x) {
      for (int c = 0; c < 3; ++c) ASSERT_EQ(r.rgb.at(x, y, c), static_cast<float>(scene.sky_color[c]));
      ASSERT_EQ(r.opacity.at(x, y), 0.0f);
      ASSERT_EQ(r.depth.at(x, y), 0.0f);
    }
  }
}

TEST(Render, SingleGaussianPeakAtPrincipalPoint) {
  SplatScene scene;
  scene.gaussians.push_back(isotropic(Vec3(0, 0, 5), 0.05, 0.99));
  const CameraIntrinsics cam;
  const RenderOutput r = render(scene, Pose(), cam);
  const auto [x, y] = argmax(r.opacity);
  EXPECT_EQ(x, 160);
  EXPECT_EQ(y, 120);
  EXPECT_NEAR(r.depth.at(160, 120), 5.0, 1e-2);
}

TEST(Render, SaturatedPixelIgnoresSky) {
  SplatScene scene;
  scene.sky_color = Vec3(0.1, 0.9, 0.3);
  scene.gaussians.push_back(isotropic(Vec3(0, 0, 5), 0.05, 1.0, Vec3(0.6, 0.4, 0.2)));
  const RenderOutput r = render(scene, Pose(), CameraIntrinsics{});
  ASSERT_EQ(r.opacity.at(160, 120), 1.0f);
  EXPECT_EQ(r.rgb.at(160, 120, 0), 0.6f);
  EXPECT_EQ(r.rgb.at(160, 120, 1), 0.4f);
  EXPECT_EQ(r.rgb.at(160, 120, 2), 0.2f);
}

TEST(Render, UniformColorIsConvexBlendWithSky) {
  SplatScene scene = random_scene(4, 3000);
  const Vec3 c(0.7, 0.3, 0.5);
  scene.sky_color = Vec3(0.1, 0.2, 0.9);
  for (Gaussian3D& g : scene.gaussians) g.color = c;
  const RenderOutput r = render(scene, synthetic_view(4), CameraIntrinsics{});
  double worst = 0.0;
  for (int y = 0; y < r.rgb.height(); ++y) {
    for (int x = 0; x < r.rgb.width(); ++x) {
      const double o = r.opacity.at(x, y);
      for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::abs(r.rgb.at(x, y, k) - (o * c[k] + (1.0 - o) * scene.sky_color[k])));
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Render, OutputInvariants) {
  const auto [scene, traj] = generate_synthetic_scene(6, {});
  const RenderOutput r = render(scene, traj[2].pose, CameraIntrinsics{});
  int valid = 0;
  for (int y = 0; y < r.rgb.height(); ++y) {
    for (int x = 0; x < r.rgb.width(); ++x) {
      for (int k = 0; k < 3; ++k) {
        ASSERT_GE(r.rgb.at(x, y, k), 0.0f);
        ASSERT_LE(r.rgb.at(x, y, k), 1.0f);
      }
      const float o = r.opacity.at(x, y);
      ASSERT_GE(o, 0.0f);
      ASSERT_LE(o, 1.0f);
      ASSERT_GE(r.depth.at(x, y), 0.0f);
      ASSERT_EQ(r.depth.at(x, y) > 0.0f, o >= kSkyOpacityThreshold) << x << "," << y;
      valid += r.depth.at(x, y) > 0.0f;
    }
  }
  EXPECT_GT(valid, 0);
}

TEST(Render, InvariantToSceneOrder) {
  SplatScene scene = random_scene(7, 2000);
  const Pose pose = synthetic_view(7);
  const RenderOutput a = render(scene, pose, CameraIntrinsics{});
  Rng rng(1);
  for (std::size_t i = scene.gaussians.size() - 1; i > 0; --i) {
    std::swap(scene.gaussians[i], scene.gaussians[rng.index(i + 1)]);
  }
  const RenderOutput b = render(scene, pose, CameraIntrinsics{});
  for (std::size_t i = 0; i < a.rgb.size(); ++i) ASSERT_NEAR(a.rgb.data()[i], b.rgb.data()[i], 1e-6);
  for (std::size_t i = 0; i < a.depth.size(); ++i) ASSERT_NEAR(a.depth.data()[i], b.depth.data()[i], 1e-6);
}

TEST(Render, Deterministic) {
  const auto [scene, traj] = generate_synthetic_scene(8, {});
  const RenderOutput a = render(scene, traj[1].pose, CameraIntrinsics{});
  const RenderOutput b = render(scene, traj[1].pose, CameraIntrinsics{});
  EXPECT_EQ(a.rgb, b.rgb);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.opacity, b.opacity);
}

// Independent per-pixel compositor: walks every projected Gaussian in depth
// order without tiles or bounding boxes and checks that the accumulated
// opacity never decreases and stays <= 1.
TEST(Render, MatchesReferenceCompositorAndOpacityIsMonotone) {
  const SplatScene scene = random_scene(9, 600);
  const Pose pose = synthetic_view(9);
  const CameraIntrinsics cam;
  const RenderConfig cfg;
  const RenderOutput r = render(scene, pose, cam);

  std::vector<ProjectedGaussian> proj;
  for (const Gaussian3D& g : scene.gaussians) {
    if (auto p = project_gaussian(g, pose, cam)) proj.push_back(*p);
  }
  std::stable_sort(proj.begin(), proj.end(),
                   [](const ProjectedGaussian& a, const ProjectedGaussian& b) { return a.z < b.z; });

  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int x = static_cast<int>(rng.index(cam.width));
    const int y = static_cast<int>(rng.index(cam.height));
    double t = 1.0, prev_opacity = 0.0, depth = 0.0;
    Vec3 color = Vec3::Zero();
    for (const ProjectedGaussian& p : proj) {
      const Vec2 d = Vec2(x, y) - p.mean2d;
      const double maha = d.dot(p.cov2d.inverse() * d);
      if (maha > cfg.extent_sigma * cfg.extent_sigma) continue;
      const double alpha = std::min(1.0, p.opacity * std::exp(-0.5 * maha));
      color += alpha * t * p.color;
      depth += alpha * t * p.z;
      t *= 1.0 - alpha;
      const double opacity = 1.0 - t;
      ASSERT_GE(opacity, prev_opacity);
      ASSERT_LE(opacity, 1.0 + 1e-6);
      prev_opacity = opacity;
      if (t < cfg.min_transmittance) break;
    }
    const Vec3 rgb = color + t * scene.sky_color;
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(r.rgb.at(x, y, k), std::clamp(rgb[k], 0.0, 1.0), 1e-5);
    EXPECT_NEAR(r.opacity.at(x, y), 1.0 - t, 1e-5);
    if (1.0 - t >= cfg.sky_threshold + 1e-6) EXPECT_NEAR(r.depth.at(x, y), depth / (1.0 - t), 1e-4);
  }
}

TEST(Render, DoubledResolutionMovesPeak) {
  SplatScene scene;
  scene.gaussians.push_back(isotropic(Vec3(0.7, -0.4, 6.0), 0.05, 0.99));
  const CameraIntrinsics cam;
  const CameraIntrinsics big = cam.scaled(2.0);
  const auto [x1, y1] = argmax(render(scene, Pose(), cam).opacity);
  const auto [x2, y2] = argmax(render(scene, Pose(), big).opacity);
  EXPECT_LE(std::abs(x2 - 2 * x1), 1);
  EXPECT_LE(std::abs(y2 - 2 * y1), 1);
}

TEST(Render, TileSizeDoesNotChangeImage) {
  const SplatScene scene = random_scene(10, 1500);
  const Pose pose = synthetic_view(10);
  RenderConfig a_cfg, b_cfg;
  b_cfg.tile_size = 7;
  const RenderOutput a = render(scene, pose, CameraIntrinsics{}, a_cfg);
  const RenderOutput b = render(scene, pose, CameraIntrinsics{}, b_cfg);
  EXPECT_EQ(a.rgb, b.rgb);
  EXPECT_EQ(a.depth, b.depth);
}

}  // namespace
}  // namespace gsreloc
