#include "gsreloc/pose/pnp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "gsreloc/error.hpp"
#include "gsreloc/pose/epnp.hpp"
#include "gsreloc/random.hpp"

namespace gsreloc {
namespace {

struct Consensus {
  std::vector<bool> inliers;
  std::size_t count = 0;
  double score = std::numeric_limits<double>::infinity();  // sum of squared inlier errors
};

Consensus consensus(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam,
                    const Pose& pose, double threshold) {
  Consensus c;
  c.inliers.assign(corrs.size(), false);
  c.score = 0.0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const double e = reprojection_error(corrs[i], cam, pose);
    if (e <= threshold) {
      c.inliers[i] = true;
      ++c.count;
      c.score += e * e;
    }
  }
  return c;
}

bool better(const Consensus& a, const Consensus& b) {
  return a.count > b.count || (a.count == b.count && a.score < b.score);
}

std::vector<Correspondence2D3D> select(std::span<const Correspondence2D3D> corrs,
                                       const std::vector<bool>& mask) {
  std::vector<Correspondence2D3D> out;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    if (mask[i]) out.push_back(corrs[i]);
  }
  return out;
}

}  // namespace

double reprojection_error(const Correspondence2D3D& c, const CameraIntrinsics& cam, const Pose& pose) {
  const Vec3 pc = pose.inverse_transform(c.world_point);
  if (!(pc.z() > cam.near)) return std::numeric_limits<double>::infinity();
  const Vec2 proj(cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy);
  return (c.pixel - proj).norm();
}

SolverReport solve_pnp(std::span<const Correspondence2D3D> corrs_in, const CameraIntrinsics& cam,
                       const PnpConfig& config) {
  if (corrs_in.size() < kEpnpMinPoints) {
    throw Error(ErrorCode::kInsufficientMatches,
                "solve_pnp needs at least 6 correspondences, got " + std::to_string(corrs_in.size()));
  }
  std::vector<Correspondence2D3D> corrs(corrs_in.begin(), corrs_in.end());
  std::sort(corrs.begin(), corrs.end(), [](const Correspondence2D3D& a, const Correspondence2D3D& b) {
    return std::make_tuple(a.pixel.x(), a.pixel.y(), a.world_point.x(), a.world_point.y(), a.world_point.z()) <
           std::make_tuple(b.pixel.x(), b.pixel.y(), b.world_point.x(), b.world_point.y(), b.world_point.z());
  });
  const std::size_t n = corrs.size();
  const double threshold = config.ransac.threshold_px;

  Rng rng(config.ransac.seed);
  Consensus best;
  best.count = 0;
  Pose best_pose;
  int trials = 0;
  double needed = config.ransac.iters;
  std::vector<Correspondence2D3D> sample(kEpnpMinPoints);
  std::vector<std::size_t> picked;
  for (; trials < config.ransac.iters && trials < needed; ++trials) {
    picked.clear();
    while (picked.size() < kEpnpMinPoints) {
      const std::size_t k = rng.index(n);
      if (std::find(picked.begin(), picked.end(), k) == picked.end()) picked.push_back(k);
    }
    for (std::size_t s = 0; s < kEpnpMinPoints; ++s) sample[s] = corrs[picked[s]];
    SolverReport hypothesis;
    try {
      hypothesis = epnp(sample, cam);
    } catch (const Error&) {
      continue;
    }
    Consensus c = consensus(corrs, cam, hypothesis.pose, threshold);
    if (best.count == 0 || better(c, best)) {
      best = std::move(c);
      best_pose = hypothesis.pose;
      const double w = static_cast<double>(best.count) / static_cast<double>(n);
      const double all_inlier = std::pow(w, static_cast<double>(kEpnpMinPoints));
      if (all_inlier >= 1.0) {
        needed = 0.0;
      } else if (all_inlier > 0.0) {
        needed = std::log(1.0 - config.ransac.confidence) / std::log(1.0 - all_inlier);
      }
    }
  }
  const auto min_inliers = static_cast<std::size_t>(std::max(config.ransac.min_inliers, 6));
  if (best.count < min_inliers) {
    throw Error(ErrorCode::kNoConsensus, "solve_pnp: best hypothesis has " + std::to_string(best.count) +
                                             " inliers, " + std::to_string(min_inliers) + " required");
  }

  // Local optimization on the consensus set; repeat while it grows.
  Pose pose = best_pose;
  Consensus current = best;
  SolverReport refined;
  for (int round = 0; round < 3; ++round) {
    const auto inlier_corrs = select(corrs, current.inliers);
    try {
      const SolverReport refit = epnp(inlier_corrs, cam);
      if (consensus(corrs, cam, refit.pose, threshold).count >= current.count) pose = refit.pose;
    } catch (const Error&) {
      // keep the minimal-sample hypothesis
    }
    refined = refine_ba(inlier_corrs, cam, pose, config.ba);
    pose = refined.pose;
    Consensus next = consensus(corrs, cam, pose, threshold);
    const bool same = next.inliers == current.inliers;
    current = std::move(next);
    if (same || current.count < min_inliers) break;
  }
  if (current.count < min_inliers) {
    throw Error(ErrorCode::kNoConsensus, "solve_pnp: consensus collapsed during refinement");
  }

  SolverReport report;
  report.pose = pose;
  report.inlier_count = current.count;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (current.inliers[i]) sum += reprojection_error(corrs[i], cam, pose);
  }
  report.mean_reprojection_error = sum / static_cast<double>(current.count);
  report.iterations = trials;
  report.converged = refined.converged;
  report.cost_history = std::move(refined.cost_history);
  return report;
}

}  // namespace gsreloc
