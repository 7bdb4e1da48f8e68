#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gsreloc/eval/metrics.hpp"
#include "gsreloc/random.hpp"
#include "support/scenario.hpp"
#include "support/test_util.hpp"

namespace gsreloc {
namespace {

Trajectory random_trajectory(Rng& rng, int n) {
  std::vector<Pose> poses;
  for (int i = 0; i < n; ++i) {
    poses.push_back(Pose::FromAxisAngle(testing::random_unit(rng), rng.uniform(0, std::numbers::pi),
                                        Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5))));
  }
  return Trajectory::FromPoses(poses);
}

// ---- pose_errors ----------------------------------------------------------

TEST(PoseErrors, Identical) {
  Rng rng(1);
  const Trajectory t = random_trajectory(rng, 10);
  for (const PoseErrorPair& p : pose_errors(t, t)) {
    EXPECT_EQ(p.translation_error, 0.0);
    EXPECT_EQ(p.rotation_error, 0.0);
  }
}

TEST(PoseErrors, TranslationOffset) {
  const Trajectory gt = Trajectory::FromPoses({Pose::Identity()});
  const Trajectory est = Trajectory::FromPoses({Pose(Quat::Identity(), Vec3(0.3, 0.4, 0.0))});
  const auto e = pose_errors(est, gt);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0].translation_error, 0.5, 1e-15);
  EXPECT_EQ(e[0].rotation_error, 0.0);
}

TEST(PoseErrors, RotationAboutZ) {
  const Trajectory gt = Trajectory::FromPoses({Pose(Quat::Identity(), Vec3(1, 2, 3))});
  const Trajectory est = Trajectory::FromPoses({Pose::FromAxisAngle(Vec3::UnitZ(), 2.0 * std::numbers::pi / 180.0, Vec3(1, 2, 3))});
  const auto e = pose_errors(est, gt);
  EXPECT_EQ(e[0].translation_error, 0.0);
  EXPECT_NEAR(e[0].rotation_error, 2.0, 1e-9);
}

TEST(PoseErrors, Mismatch) {
  Rng rng(2);
  const Trajectory a = random_trajectory(rng, 3);
  const Trajectory b = random_trajectory(rng, 4);
  EXPECT_GSRELOC_ERROR(pose_errors(a, b), ErrorCode::kInvalidArgument);
  Trajectory c;
  for (std::size_t i = 0; i < a.size(); ++i) c.push_back(static_cast<long long>(2 * i), a[i].pose);
  EXPECT_GSRELOC_ERROR(pose_errors(a, c), ErrorCode::kInvalidArgument);
}

TEST(PoseErrorsProperty, SymmetricAndBounded) {
  Rng rng(3);
  const Trajectory a = random_trajectory(rng, 200);
  const Trajectory b = random_trajectory(rng, 200);
  const auto ab = pose_errors(a, b);
  const auto ba = pose_errors(b, a);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    EXPECT_EQ(ab[i].translation_error, ba[i].translation_error);
    EXPECT_NEAR(ab[i].rotation_error, ba[i].rotation_error, 1e-9);
    EXPECT_GE(ab[i].rotation_error, 0.0);
    EXPECT_LE(ab[i].rotation_error, 180.0);
  }
}

TEST(AlignTrajectory, RemovesRigidOffset) {
  Rng rng(4);
  const Trajectory gt = random_trajectory(rng, 20);
  const Pose offset = Pose::FromAxisAngle(Vec3(1, 2, 3), 0.4, Vec3(2, -1, 0.5));
  std::vector<Pose> moved;
  for (const StampedPose& p : gt) moved.push_back(offset * p.pose);
  const Trajectory est = Trajectory::FromPoses(moved);
  const Trajectory aligned = align_trajectory(est, gt);
  for (const PoseErrorPair& e : pose_errors(aligned, gt)) {
    EXPECT_LT(e.translation_error, 1e-9);
    EXPECT_LT(e.rotation_error, 1e-6);
  }
}

// ---- ate_statistics -------------------------------------------------------

TEST(AteStatistics, HandArithmetic) {
  const std::vector<double> e{0.1, 0.2, 0.3};
  const AteStats s = ate_statistics(e);
  EXPECT_NEAR(s.mean, 0.2, 1e-12);
  EXPECT_NEAR(s.median, 0.2, 1e-12);
  EXPECT_EQ(s.min, 0.1);
  EXPECT_EQ(s.max, 0.3);
  EXPECT_NEAR(s.rmse, std::sqrt(0.14 / 3.0), 1e-12);
  EXPECT_NEAR(s.std, std::sqrt(0.02 / 3.0), 1e-12);
  EXPECT_NEAR(s.rmse, 0.21602, 1e-5);
  EXPECT_NEAR(s.std, 0.08165, 1e-5);
}

TEST(AteStatistics, SingleZero) {
  const std::vector<double> e{0.0};
  const AteStats s = ate_statistics(e);
  for (const double v : {s.rmse, s.std, s.mean, s.median, s.min, s.max}) EXPECT_EQ(v, 0.0);
}

TEST(AteStatistics, EvenMedianAndErrors) {
  const std::vector<double> e{0.4, 0.1, 0.3, 0.2};
  EXPECT_NEAR(ate_statistics(e).median, 0.25, 1e-15);
  EXPECT_GSRELOC_ERROR(ate_statistics(std::vector<double>{}), ErrorCode::kInvalidArgument);
}

TEST(AteStatisticsProperty, RmseIdentityAndOrdering) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> e(1 + rng.index(50));
    for (double& v : e) v = rng.uniform(0.0, 2.0);
    const AteStats s = ate_statistics(e);
    EXPECT_NEAR(s.rmse * s.rmse, s.mean * s.mean + s.std * s.std, 1e-9);
    EXPECT_LE(s.min, s.median);
    EXPECT_LE(s.median, s.max);
    EXPECT_LE(s.mean, s.max);
  }
}

// ---- recall_at ------------------------------------------------------------

TEST(Recall, Examples) {
  const std::vector<PoseErrorPair> zeros(5);
  EXPECT_EQ(recall_at(zeros, 0.1, 1.0), 1.0);
  const std::vector<PoseErrorPair> two{{0.05, 0.5}, {0.2, 0.5}};
  EXPECT_EQ(recall_at(two, 0.1, 1.0), 0.5);
  // Strict inequality on both thresholds.
  const std::vector<PoseErrorPair> edge{{0.1, 0.5}, {0.05, 1.0}};
  EXPECT_EQ(recall_at(edge, 0.1, 1.0), 0.0);
}

TEST(Recall, Errors) {
  EXPECT_GSRELOC_ERROR(recall_at(std::vector<PoseErrorPair>{}, 0.1, 1.0), ErrorCode::kInvalidArgument);
  const std::vector<PoseErrorPair> one(1);
  EXPECT_GSRELOC_ERROR(recall_at(one, 0.0, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_GSRELOC_ERROR(recall_at(one, 0.1, -1.0), ErrorCode::kInvalidArgument);
}

TEST(RecallProperty, MatchesBruteForceCount) {
  Rng rng(6);
  std::vector<PoseErrorPair> pairs(1000);
  for (auto& p : pairs) p = {rng.uniform(0.0, 0.3), rng.uniform(0.0, 3.0)};
  for (int trial = 0; trial < 20; ++trial) {
    const double tt = rng.uniform(0.01, 0.3), rt = rng.uniform(0.1, 3.0);
    std::size_t count = 0;
    for (const auto& p : pairs) count += (p.translation_error < tt && p.rotation_error < rt) ? 1 : 0;
    EXPECT_EQ(recall_at(pairs, tt, rt), static_cast<double>(count) / 1000.0);
  }
}

TEST(RecallProperty, MonotoneInThresholds) {
  Rng rng(7);
  std::vector<PoseErrorPair> pairs(300);
  for (auto& p : pairs) p = {rng.uniform(0.0, 0.3), rng.uniform(0.0, 3.0)};
  double prev = 0.0;
  for (double t = 0.01; t < 0.4; t += 0.01) {
    const double r = recall_at(pairs, t, 1.0);
    EXPECT_GE(r, prev);
    prev = r;
  }
  prev = 0.0;
  for (double a = 0.1; a < 4.0; a += 0.1) {
    const double r = recall_at(pairs, 0.1, a);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

// ---- error_histogram ------------------------------------------------------

TEST(Histogram, Boundaries) {
  const std::vector<double> edges{0.0, 1.0};
  Histogram h = error_histogram(std::vector<double>{0.5}, edges);
  EXPECT_EQ(h.counts, std::vector<std::size_t>{1});
  EXPECT_EQ(h.overflow, 0u);
  h = error_histogram(std::vector<double>{1.0}, edges);
  EXPECT_EQ(h.counts, std::vector<std::size_t>{0});
  EXPECT_EQ(h.overflow, 1u);
  h = error_histogram(std::vector<double>{0.0, -0.1}, edges);
  EXPECT_EQ(h.counts, std::vector<std::size_t>{1});
  EXPECT_EQ(h.overflow, 1u);
  EXPECT_EQ(h.edges, edges);
}

TEST(Histogram, BadEdges) {
  const std::vector<double> v{0.5};
  EXPECT_GSRELOC_ERROR(error_histogram(v, std::vector<double>{1.0}), ErrorCode::kInvalidArgument);
  EXPECT_GSRELOC_ERROR(error_histogram(v, std::vector<double>{0.0, 1.0, 1.0}), ErrorCode::kInvalidArgument);
  EXPECT_GSRELOC_ERROR(error_histogram(v, std::vector<double>{0.0, 2.0, 1.0}), ErrorCode::kInvalidArgument);
}

TEST(Histogram, UniformBinomial) {
  Rng rng(8);
  std::vector<double> v(10000);
  for (double& x : v) x = rng.uniform();
  std::vector<double> edges;
  for (int i = 0; i <= 10; ++i) edges.push_back(i / 10.0);
  const Histogram h = error_histogram(v, edges);
  const double sigma = std::sqrt(10000 * 0.1 * 0.9);
  for (const std::size_t c : h.counts) EXPECT_LE(std::abs(static_cast<double>(c) - 1000.0), 3.0 * sigma);
  EXPECT_EQ(h.overflow, 0u);
}

TEST(HistogramProperty, PermutationInvariantAndTotalPreserving) {
  Rng rng(9);
  const std::vector<double> edges{0.0, 0.05, 0.1, 0.2, 0.5, 1.0};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(rng.index(200));
    for (double& x : v) x = rng.uniform(-0.2, 1.3);
    const Histogram a = error_histogram(v, edges);
    std::size_t total = a.overflow;
    for (const std::size_t c : a.counts) total += c;
    EXPECT_EQ(total, v.size());
    std::reverse(v.begin(), v.end());
    const Histogram b = error_histogram(v, edges);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.overflow, b.overflow);
  }
}

// ---- timing_report --------------------------------------------------------

IterationTrace timed_trace() {
  IterationTrace t;
  t.detect_ms = 10.0;
  t.match_ms = 30.0;
  t.pnp_ms = 2.0;
  t.render_ms = 6.0;
  return t;
}

TEST(Timing, SingleTrace) {
  const std::vector<IterationTrace> t{timed_trace()};
  const TimingReport r = timing_report(t);
  EXPECT_EQ(r.detect.mean_ms, 10.0);
  EXPECT_EQ(r.match.mean_ms, 30.0);
  EXPECT_EQ(r.pnp.mean_ms, 2.0);
  EXPECT_EQ(r.render.mean_ms, 6.0);
  for (const auto& s : {r.detect, r.match, r.pnp, r.render}) EXPECT_EQ(s.count, 1u);
}

TEST(Timing, TwoIdenticalAndFive) {
  const std::vector<IterationTrace> two(2, timed_trace());
  const TimingReport r = timing_report(two);
  EXPECT_EQ(r.match.mean_ms, 30.0);
  EXPECT_EQ(r.match.count, 2u);
  const std::vector<IterationTrace> five(5, timed_trace());
  EXPECT_NEAR(timing_report(five).total_s, 0.24, 1e-12);
}

TEST(Timing, MissingStagesAndTotals) {
  IterationTrace first = timed_trace();
  first.render_ms.reset();
  first.total_ms = 100.0;
  IterationTrace second = timed_trace();
  const std::vector<IterationTrace> t{first, second};
  const TimingReport r = timing_report(t);
  EXPECT_EQ(r.render.count, 1u);
  EXPECT_EQ(r.detect.count, 2u);
  EXPECT_NEAR(r.total_s, 0.148, 1e-12);
  EXPECT_GSRELOC_ERROR(timing_report(std::vector<IterationTrace>{}), ErrorCode::kInvalidArgument);
}

TEST(TimingProperty, TotalCoversStagesOnRealRuns) {
  const auto s = testing::make_scenario(3);
  const RelocalizationResult r = relocalize(s.query, s.db, s.scene, s.cam, ReferenceMatcher());
  ASSERT_FALSE(r.traces.empty());
  const TimingReport rep = timing_report(r.traces);
  double stages = 0.0;
  for (const auto& st : {rep.detect, rep.match, rep.pnp, rep.render}) {
    EXPECT_GE(st.mean_ms, 0.0);
    stages += st.mean_ms * static_cast<double>(st.count) / 1000.0;
  }
  EXPECT_GE(rep.total_s, 0.8 * stages);
}

}  // namespace
}  // namespace gsreloc
