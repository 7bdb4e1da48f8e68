#include <numbers>

#include <benchmark/benchmark.h>

#include "gsreloc/features/detector.hpp"
#include "gsreloc/features/matcher.hpp"
#include "gsreloc/features/matching.hpp"
#include "gsreloc/pose/epnp.hpp"
#include "gsreloc/pose/pnp.hpp"
#include "gsreloc/random.hpp"
#include "gsreloc/reloc/anchors.hpp"
#include "gsreloc/reloc/relocalizer.hpp"
#include "gsreloc/render/rasterizer.hpp"
#include "gsreloc/scene/synthetic.hpp"

namespace gsreloc {
namespace {

struct World {
  SplatScene scene;
  Trajectory trajectory;
  AnchorDatabase db;
  CameraIntrinsics cam;

  World() {
    std::tie(scene, trajectory) = generate_synthetic_scene(7, {});
    db = build_anchor_db(scene, trajectory, cam, kDefaultAnchorSpacing);
  }
};

const World& world() {
  static const World w;
  return w;
}

// Query 0.5 m and 5 degrees away from trajectory pose `i`.
Pose offset_pose(const World& w, std::size_t i) {
  return Pose::FromAxisAngle(Vec3(0, 1, 0), 5.0 * std::numbers::pi / 180.0, Vec3(0.3, 0.0, 0.4)) *
         w.trajectory[i].pose;
}

std::vector<Correspondence2D3D> corrs(int n, std::size_t outliers, Rng& rng, const CameraIntrinsics& cam,
                                      const Pose& pose) {
  std::vector<Correspondence2D3D> out;
  for (int i = 0; i < n; ++i) {
    const Vec2 px(rng.uniform(0, cam.width - 1), rng.uniform(0, cam.height - 1));
    const double z = rng.uniform(2.0, 10.0);
    const Vec3 p((px.x() - cam.cx) / cam.fx * z, (px.y() - cam.cy) / cam.fy * z, z);
    out.push_back({px, pose.rotation() * p + pose.translation()});
  }
  for (std::size_t i = 0; i < outliers; ++i) {
    out[i].pixel = Vec2(rng.uniform(0, cam.width - 1), rng.uniform(0, cam.height - 1));
  }
  return out;
}

void BM_Render(benchmark::State& state) {
  const World& w = world();
  for (auto _ : state) benchmark::DoNotOptimize(render(w.scene, w.trajectory[3].pose, w.cam));
  state.counters["gaussians"] = static_cast<double>(w.scene.gaussians.size());
}
BENCHMARK(BM_Render)->Unit(benchmark::kMillisecond);

void BM_DetectAndDescribe(benchmark::State& state) {
  const Image& img = world().db.anchors.front().rgb;
  for (auto _ : state) benchmark::DoNotOptimize(detect_and_describe(img));
}
BENCHMARK(BM_DetectAndDescribe)->Unit(benchmark::kMillisecond);

void BM_MatchFeatures(benchmark::State& state) {
  const World& w = world();
  const auto a = detect_and_describe(w.db.anchors.front().rgb);
  const auto b = detect_and_describe(render(w.scene, offset_pose(w, 0), w.cam).rgb);
  for (auto _ : state) benchmark::DoNotOptimize(match_features(a, b));
}
BENCHMARK(BM_MatchFeatures)->Unit(benchmark::kMillisecond);

void BM_Epnp(benchmark::State& state) {
  const CameraIntrinsics cam;
  Rng rng(1);
  const auto c = corrs(static_cast<int>(state.range(0)), 0, rng, cam, Pose::Identity());
  for (auto _ : state) benchmark::DoNotOptimize(epnp(c, cam));
}
BENCHMARK(BM_Epnp)->Arg(20)->Arg(200);

void BM_SolvePnp(benchmark::State& state) {
  const CameraIntrinsics cam;
  Rng rng(2);
  const auto c = corrs(200, static_cast<std::size_t>(state.range(0)), rng, cam, Pose::Identity());
  for (auto _ : state) benchmark::DoNotOptimize(solve_pnp(c, cam));
}
BENCHMARK(BM_SolvePnp)->Arg(0)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Relocalize(benchmark::State& state) {
  const World& w = world();
  const Pose truth = offset_pose(w, 4);
  const Image query = render(w.scene, truth, w.cam).rgb;
  OracleConfig oc;
  oc.pixel_noise_sigma = 0.5;
  const OracleMatcher oracle(truth, w.scene, w.cam, oc);
  const ReferenceMatcher reference;
  const Matcher& m = state.range(0) == 0 ? static_cast<const Matcher&>(oracle) : reference;
  for (auto _ : state) benchmark::DoNotOptimize(relocalize(query, w.db, w.scene, w.cam, m));
  state.SetLabel(state.range(0) == 0 ? "oracle" : "reference");
}
BENCHMARK(BM_Relocalize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gsreloc

// The packaged benchmark_main archive is LTO bytecode tied to another
// compiler version, so main lives here.
BENCHMARK_MAIN();
