#include "gsreloc/pose/bundle_adjustment.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "gsreloc/error.hpp"

namespace gsreloc {
namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kStepTolerance = 1e-10;
constexpr double kCostTolerance = 1e-12;
constexpr double kMaxLambda = 1e12;

// Residual and its 2x6 Jacobian for one point already in the camera frame.
void point_terms(const Vec3& pc, const Vec2& pixel, const CameraIntrinsics& cam, Vec2& r,
                 Eigen::Matrix<double, 2, 6>& j) {
  const double inv_z = 1.0 / pc.z();
  const Vec2 proj(cam.fx * pc.x() * inv_z + cam.cx, cam.fy * pc.y() * inv_z + cam.cy);
  r = pixel - proj;
  Eigen::Matrix<double, 2, 3> dproj;
  dproj << cam.fx * inv_z, 0.0, -cam.fx * pc.x() * inv_z * inv_z,
           0.0, cam.fy * inv_z, -cam.fy * pc.y() * inv_z * inv_z;
  Eigen::Matrix<double, 3, 6> dp;
  dp.leftCols<3>() = -skew(pc);
  dp.rightCols<3>() = Mat3::Identity();
  j = -dproj * dp;
}

struct Evaluation {
  double cost = 0.0;
  Mat6 h = Mat6::Zero();
  Vector6d g = Vector6d::Zero();
  std::vector<bool> valid;
  std::size_t valid_count = 0;
};

double huber(double s, double delta) { return s <= delta ? 0.5 * s * s : delta * (s - 0.5 * delta); }

Evaluation evaluate(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam,
                    const Pose& pose, const BaConfig& config, const std::vector<bool>* mask) {
  Evaluation e;
  e.valid.assign(corrs.size(), false);
  const Pose world_to_cam = pose.inverse();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const Vec3 pc = world_to_cam.transform(corrs[i].world_point);
    if (!(pc.z() > cam.near)) continue;
    e.valid[i] = true;
    ++e.valid_count;
    Vec2 r;
    Eigen::Matrix<double, 2, 6> j;
    point_terms(pc, corrs[i].pixel, cam, r, j);
    const double s = r.norm();
    double w = 1.0;
    if (config.robust) {
      e.cost += huber(s, config.huber_delta);
      if (s > config.huber_delta) w = config.huber_delta / s;
    } else {
      e.cost += 0.5 * s * s;
    }
    e.h.noalias() += w * j.transpose() * j;
    e.g.noalias() += w * j.transpose() * r;
  }
  return e;
}

}  // namespace

Pose apply_left_perturbation(const Pose& pose, const Vector6d& delta) {
  const Pose world_to_cam = pose.inverse();
  const Mat3 rot = exp_so3(delta.head<3>());
  const Mat3 r = rot * world_to_cam.rotation_matrix();
  const Vec3 t = rot * world_to_cam.translation() + delta.tail<3>();
  return Pose::FromMatrix(r, t).inverse();
}

ReprojectionResiduals reprojection_residuals(std::span<const Correspondence2D3D> corrs,
                                             const CameraIntrinsics& cam, const Pose& pose) {
  ReprojectionResiduals out;
  const auto n = static_cast<Eigen::Index>(corrs.size());
  out.residuals.resize(2 * n);
  out.jacobian.resize(2 * n, 6);
  const Pose world_to_cam = pose.inverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 pc = world_to_cam.transform(corrs[static_cast<std::size_t>(i)].world_point);
    if (!(pc.z() > cam.near)) {
      throw Error(ErrorCode::kCheiralityViolation,
                  "correspondence " + std::to_string(i) + " is at or behind the camera plane");
    }
    Vec2 r;
    Eigen::Matrix<double, 2, 6> j;
    point_terms(pc, corrs[static_cast<std::size_t>(i)].pixel, cam, r, j);
    out.residuals.segment<2>(2 * i) = r;
    out.jacobian.middleRows<2>(2 * i) = j;
  }
  return out;
}

SolverReport refine_ba(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam,
                       const Pose& init_pose, const BaConfig& config) {
  Evaluation current = evaluate(corrs, cam, init_pose, config, nullptr);
  if (current.valid_count == 0) {
    throw Error(ErrorCode::kCheiralityViolation, "refine_ba: all points are behind the camera");
  }
  // Freeze the set of points in front of the camera at the initial pose.
  const std::vector<bool> active = current.valid;

  SolverReport report;
  report.pose = init_pose;
  report.cost_history.push_back(current.cost);
  double lambda = config.initial_lambda;
  int iterations = 0;
  bool converged = false;

  while (iterations < config.max_iters) {
    ++iterations;
    if (current.cost == 0.0 || current.g.norm() == 0.0) {
      converged = true;
      break;
    }
    Mat6 damped = current.h;
    damped.diagonal() += lambda * current.h.diagonal();
    const Eigen::LDLT<Mat6> ldlt(damped);
    const Vector6d step = ldlt.solve(-current.g);
    const bool solved = ldlt.info() == Eigen::Success && step.allFinite() &&
                        (damped * step + current.g).norm() <= 1e-6 * (current.g.norm() + 1e-300);
    if (!solved) {
      lambda *= 10.0;
      if (lambda > kMaxLambda) {
        throw Error(ErrorCode::kSingular, "refine_ba: normal equations stay singular under damping");
      }
      continue;
    }
    if (step.norm() < kStepTolerance) {
      converged = true;
      break;
    }
    const Pose candidate = apply_left_perturbation(report.pose, step);
    Evaluation next = evaluate(corrs, cam, candidate, config, &active);
    if (next.valid_count == current.valid_count && next.cost < current.cost) {
      const double decrease = current.cost - next.cost;
      report.pose = candidate;
      current = std::move(next);
      report.cost_history.push_back(current.cost);
      lambda = std::max(lambda / 10.0, 1e-12);
      if (decrease < kCostTolerance) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > kMaxLambda) {
        converged = true;  // no descent direction left at this precision
        break;
      }
    }
  }

  const Pose world_to_cam = report.pose.inverse();
  double err_sum = 0.0;
  std::size_t inliers = 0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    if (!active[i]) continue;
    const Vec3 pc = world_to_cam.transform(corrs[i].world_point);
    if (!(pc.z() > cam.near)) continue;
    const Vec2 proj(cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy);
    const double s = (corrs[i].pixel - proj).norm();
    if (config.robust && s > config.huber_delta) continue;
    err_sum += s;
    ++inliers;
  }
  report.inlier_count = inliers;
  report.mean_reprojection_error = inliers ? err_sum / static_cast<double>(inliers) : 0.0;
  report.iterations = iterations;
  report.converged = converged;
  return report;
}

}  // namespace gsreloc
