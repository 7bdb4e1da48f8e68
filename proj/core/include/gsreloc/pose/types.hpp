#pragma once

#include <vector>

#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

// Query pixel paired with a world point.
struct Correspondence2D3D {
  Vec2 pixel = Vec2::Zero();
  Vec3 world_point = Vec3::Zero();
};

struct SolverReport {
  Pose pose;  // camera-to-world
  std::size_t inlier_count = 0;
  double mean_reprojection_error = 0.0;  // pixels, over inliers
  int iterations = 0;
  bool converged = false;
  // Cost after every accepted step, starting with the initial cost. Empty
  // for solvers without an iterative cost.
  std::vector<double> cost_history;
};

}  // namespace gsreloc
