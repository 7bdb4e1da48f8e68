// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "gsreloc/eval/metrics.hpp"
#include "gsreloc/pose/absolute_orientation.hpp"
#include "gsreloc/pose/bundle_adjustment.hpp"
#include "gsreloc/pose/epnp.hpp"
#include "gsreloc/pose/pnp.hpp"
#include "gsreloc/random.hpp"
#include "gsreloc/render/rasterizer.hpp"
#include "support/scenario.hpp"
#include "support/test_util.hpp"

namespace gsreloc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Pose random_pose(Rng& rng) {
  return Pose::FromAxisAngle(testing::random_unit(rng), rng.uniform(0.0, std::numbers::pi),
                             Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)));
}

// Pixels and depths drawn in the camera and lifted with the true pose.
std::vector<Correspondence2D3D> make_corrs(const Pose& pose, const CameraIntrinsics& cam, int n, Rng& rng) {
  std::vector<Correspondence2D3D> out;
  for (int i = 0; i < n; ++i) {
    const Vec2 px(rng.uniform(0, cam.width - 1), rng.uniform(0, cam.height - 1));
    const double depth = rng.uniform(2.0, 10.0);
    const Vec3 p_cam((px.x() - cam.cx) / cam.fx * depth, (px.y() - cam.cy) / cam.fy * depth, depth);
    out.push_back({px, pose.rotation() * p_cam + pose.translation()});
  }
  return out;
}

Outcome epnp_exactness() {
  const CameraIntrinsics cam;
  Rng rng(1001);
  const auto t0 = Clock::now();
  double worst_t = 0.0, worst_r = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Pose truth = random_pose(rng);
    const PoseDelta d = pose_delta(epnp(make_corrs(truth, cam, 20, rng), cam).pose, truth);
    worst_t = std::max(worst_t, d.translation);
    worst_r = std::max(worst_r, d.rotation);
  }
  const double secs = seconds_since(t0);
  return {worst_t < 1e-6 && worst_r < 1e-6 && secs < 5.0,
          fmt("worst %.2e m / %.2e rad, %.3f s", worst_t, worst_r, secs)};
}

Outcome ba_jacobian() {
  const CameraIntrinsics cam;
  Rng rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Pose truth = random_pose(rng);
    const auto corrs = make_corrs(truth, cam, 10, rng);
    const Pose at = testing::perturb(truth, 0.05, 1.0, rng);
    const ReprojectionResiduals r = reprojection_residuals(corrs, cam, at);
    Eigen::MatrixXd fd(r.jacobian.rows(), 6);
    const double h = 1e-6;
    for (int k = 0; k < 6; ++k) {
      Vector6d d = Vector6d::Zero();
      d[k] = h;
      fd.col(k) = (reprojection_residuals(corrs, cam, apply_left_perturbation(at, d)).residuals -
                   reprojection_residuals(corrs, cam, apply_left_perturbation(at, -d)).residuals) /
                  (2.0 * h);
    }
    worst = std::max(worst, (fd - r.jacobian).cwiseAbs().maxCoeff() / r.jacobian.cwiseAbs().maxCoeff());
  }
  return {worst < 1e-5, fmt("max relative error %.2e", worst)};
}

Outcome umeyama_recovery() {
  Rng rng(1003);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Pose t = random_pose(rng);
    std::vector<Vec3> a, b;
    for (int i = 0; i < 10; ++i) {
      a.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
      b.push_back(t.transform(a.back()));
    }
    const Pose est = umeyama_align(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (est.transform(a[i]) - b[i]).norm());
  }
  return {worst < 1e-9, fmt("max residual %.2e", worst)};
}

Gaussian3D isotropic(const Vec3& mean, double s, double opacity, const Vec3& color) {
  Gaussian3D g;
  g.mean = mean;
  g.scale = Vec3::Constant(s);
  g.opacity = opacity;
  g.color = color;
  return g;
}

Outcome renderer_identities() {
  const CameraIntrinsics cam;
  SplatScene empty;
  empty.sky_color = Vec3(0.25, 0.5, 0.75);
  const RenderOutput e = render(empty, Pose(), cam);
  bool sky = true;
  for (int y = 0; y < e.rgb.height(); ++y) {
    for (int x = 0; x < e.rgb.width(); ++x) {
      for (int c = 0; c < 3; ++c) sky = sky && e.rgb.at(x, y, c) == static_cast<float>(empty.sky_color[c]);
    }
  }

  SplatScene one;
  one.gaussians.push_back(isotropic(Vec3(0, 0, 5), 0.05, 0.99, Vec3(0.8, 0.2, 0.1)));
  const RenderOutput s = render(one, Pose(), cam);
  int bx = 0, by = 0;
  for (int y = 0; y < s.opacity.height(); ++y) {
    for (int x = 0; x < s.opacity.width(); ++x) {
      if (s.opacity.at(x, y) > s.opacity.at(bx, by)) bx = x, by = y;
    }
  }
  const bool peak = bx == static_cast<int>(cam.cx) && by == static_cast<int>(cam.cy);
  const double depth_err = std::abs(s.depth.at(bx, by) - 5.0);

  auto [scene, traj] = generate_synthetic_scene(4, {});
  const Vec3 c(0.7, 0.3, 0.5);
  scene.sky_color = Vec3(0.1, 0.2, 0.9);
  for (Gaussian3D& g : scene.gaussians) g.color = c;
  const RenderOutput u = render(scene, traj[3].pose, cam);
  double convex = 0.0;
  for (int y = 0; y < u.rgb.height(); ++y) {
    for (int x = 0; x < u.rgb.width(); ++x) {
      const double o = u.opacity.at(x, y);
      for (int k = 0; k < 3; ++k) {
        convex = std::max(convex, std::abs(u.rgb.at(x, y, k) - (o * c[k] + (1.0 - o) * scene.sky_color[k])));
      }
    }
  }
  return {sky && peak && depth_err < 1e-2 && convex < 1e-6,
          fmt("sky %s, peak (%d,%d), depth err %.2e, convexity %.2e", sky ? "exact" : "WRONG", bx, by, depth_err,
              convex)};
}

struct SeedRun {
  RelocalizationResult result;
  Pose truth;
  double seconds;
};

const std::vector<SeedRun>& seed_runs(double& total_seconds) {
  static double total = 0.0;
  static const std::vector<SeedRun> runs = [] {
    const auto t0 = Clock::now();
    std::vector<SeedRun> out;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const testing::RelocScenario s = testing::make_scenario(seed);
      OracleConfig oc;
      oc.pixel_noise_sigma = 0.5;
      oc.seed = seed;
      const OracleMatcher m(s.query_pose, s.scene, s.cam, oc);
      const auto t1 = Clock::now();
      RelocalizationResult r = relocalize(s.query, s.db, s.scene, s.cam, m);
      out.push_back({std::move(r), s.query_pose, seconds_since(t1)});
    }
    total = seconds_since(t0);
    return out;
  }();
  total_seconds = total;
  return runs;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome end_to_end() {
  double total = 0.0;
  const auto& runs = seed_runs(total);
  std::vector<double> te, re, iters;
  for (const SeedRun& r : runs) {
    if (r.result.status != RelocStatus::kConverged) continue;
    const PoseDelta d = pose_delta(r.result.pose, r.truth);
    te.push_back(d.translation);
    re.push_back(d.rotation * 180.0 / std::numbers::pi);
    iters.push_back(static_cast<double>(r.result.traces.size()));
  }
  const double rate = static_cast<double>(te.size()) / static_cast<double>(runs.size());
  const double mt = median(te), mr = median(re), mi = median(iters);
  return {rate >= 0.95 && mt < 0.02 && mr < 0.1 && mi <= 5 && total < 300.0,
          fmt("converged %zu/%zu, median %.4f m / %.4f deg, median iters %.1f, %.1f s", te.size(), runs.size(), mt,
              mr, mi, total)};
}

Outcome match_trend() {
  double total = 0.0;
  const auto& runs = seed_runs(total);
  int mono = 0;
  for (const SeedRun& r : runs) {
    bool ok = true;
    for (std::size_t i = 1; i < r.result.traces.size(); ++i) {
      ok = ok && r.result.traces[i].match_count >= r.result.traces[i - 1].match_count;
    }
    mono += ok;
  }
  return {mono >= 0.9 * static_cast<double>(runs.size()),
          fmt("non-decreasing in %d/%zu trials", mono, runs.size())};
}

Outcome wall_clock() {
  double total = 0.0;
  const auto& runs = seed_runs(total);
  double worst = 0.0;
  for (const SeedRun& r : runs) worst = std::max(worst, r.seconds);
  return {worst <= 2.0, fmt("slowest single relocalization %.3f s", worst)};
}

Outcome evaluation_oracles() {
  const std::vector<double> e{0.1, 0.2, 0.3};
  const AteStats s = ate_statistics(e);
  const bool hand = std::abs(s.rmse - 0.21602) < 1e-5 && std::abs(s.std - 0.08165) < 1e-5;

  Rng rng(1008);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng.index(50));
    for (double& x : v) x = rng.uniform(0.0, 2.0);
    const AteStats a = ate_statistics(v);
    worst = std::max(worst, std::abs(a.rmse * a.rmse - (a.mean * a.mean + a.std * a.std)));
  }

  std::vector<PoseErrorPair> pairs(1000);
  for (PoseErrorPair& p : pairs) p = {rng.uniform(0.0, 0.3), rng.uniform(0.0, 3.0)};
  bool recall = true;
  for (const auto& [t, r] : {std::pair{0.1, 1.0}, {0.05, 0.5}, {0.25, 2.0}, {1.0, 10.0}}) {
    std::size_t count = 0;
    for (const PoseErrorPair& p : pairs) count += p.translation_error < t && p.rotation_error < r;
    recall = recall && recall_at(pairs, t, r) == static_cast<double>(count) / 1000.0;
  }
  return {hand && worst < 1e-9 && recall,
          fmt("rmse %.5f std %.5f, identity worst %.2e, recall %s", s.rmse, s.std, worst,
              recall ? "exact" : "MISMATCH")};
}

Outcome ransac_robustness() {
  const CameraIntrinsics cam;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(2000 + seed);
    const Pose truth = random_pose(rng);
    auto corrs = make_corrs(truth, cam, 100, rng);
    for (std::size_t i = 0; i < 40; ++i) {
      Vec2 p;
      do {
        p = Vec2(rng.uniform(0, cam.width - 1), rng.uniform(0, cam.height - 1));
      } while ((p - corrs[i].pixel).norm() < 20.0);
      corrs[i].pixel = p;
    }
    PnpConfig cfg;
    cfg.ransac.seed = seed;
    try {
      ok += pose_delta(solve_pnp(corrs, cam, cfg).pose, truth).translation < 0.005;
    } catch (const Error&) {
    }
  }
  return {ok >= 49, fmt("%d/50 within 0.005 m", ok)};
}

Outcome determinism() {
  testing::TempDir dir;
  std::ostringstream out, err;
  const std::string scene = (dir / "s.gsplat").string();
  const std::string queries = (dir / "q").string();
  if (cli::run({"synth", "--seed", "9", "--out", scene, "--queries", queries, "--n-queries", "3"}, out, err) != 0 ||
      cli::run({"build-anchors", "--scene", scene, "--trajectory", (dir / "s.poses.txt").string(), "--out",
                (dir / "db").string()},
               out, err) != 0) {
    return {false, "setup failed: " + err.str()};
  }
  std::vector<std::string> names;
  for (const char* o : {"a", "b"}) {
    const int code = cli::run({"relocalize", "--anchors", (dir / "db").string(), "--scene", scene, "--queries",
                               queries, "--out", (dir / o).string(), "--matcher", "oracle", "--ground-truth",
                               queries + "/ground_truth.txt", "--seed", "5"},
                              out, err);
    if (code != 0) return {false, "relocalize failed: " + err.str()};
  }
  int same = 0, files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    ++files;
    same += testing::read_text(entry.path()) == testing::read_text(dir / "b" / entry.path().filename().string());
  }
  return {files == 3 && same == files, fmt("%d/%d result files byte-identical", same, files)};
}

}  // namespace
}  // namespace gsreloc

int main() {
  using namespace gsreloc;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"EPnP exactness", epnp_exactness},
      {"BA Jacobian vs finite differences", ba_jacobian},
      {"Umeyama exact recovery", umeyama_recovery},
      {"renderer identities", renderer_identities},
      {"end-to-end synthetic relocalization", end_to_end},
      {"match count trend", match_trend},
      {"single relocalization wall clock", wall_clock},
      {"evaluation oracles", evaluation_oracles},
      {"RANSAC robustness", ransac_robustness},
      {"relocalize determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
