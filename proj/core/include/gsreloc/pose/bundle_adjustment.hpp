#pragma once

#include <span>

#include "gsreloc/pose/types.hpp"
#include "gsreloc/scene/camera.hpp"

namespace gsreloc {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Perturbation convention for every Jacobian in this module: with
// T_cw = pose^-1 (world-to-camera) and delta = (omega, v),
//   T_cw' = (Exp(omega) R_cw, Exp(omega) t_cw + v),
// i.e. a left-multiplied SE(3) increment, rotation first.
Pose apply_left_perturbation(const Pose& pose, const Vector6d& delta);

struct ReprojectionResiduals {
  Eigen::VectorXd residuals;                   // 2n, r_i = u_i - pi(K T_cw P_i)
  Eigen::Matrix<double, Eigen::Dynamic, 6> jacobian;  // d r / d delta
};

// Throws kCheiralityViolation if any point has camera depth <= near.
ReprojectionResiduals reprojection_residuals(std::span<const Correspondence2D3D> corrs,
                                             const CameraIntrinsics& cam, const Pose& pose);

struct BaConfig {
  int max_iters = 50;
  double huber_delta = 2.0;  // pixels
  bool robust = true;        // false = plain least squares
  double initial_lambda = 1e-4;
};

// Levenberg-Marquardt over the 6-DoF pose. Points behind the camera at the
// initial pose are left out; steps that push further points behind are
// rejected. Stops on step norm < 1e-10, cost decrease < 1e-12, or
// max_iters. Throws kCheiralityViolation when no point is in front of the
// camera and kSingular when damping cannot make the normal equations
// solvable.
SolverReport refine_ba(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam,
                       const Pose& init_pose, const BaConfig& config = {});

}  // namespace gsreloc
