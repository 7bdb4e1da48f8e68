#pragma once

#include <span>
#include <vector>

#include "gsreloc/reloc/relocalizer.hpp"
#include "gsreloc/scene/trajectory.hpp"

namespace gsreloc {

struct PoseErrorPair {
  double translation_error = 0.0;  // meters
  double rotation_error = 0.0;     // degrees, [0, 180]
};

// Per-pose absolute errors, no alignment. Throws kInvalidArgument when the
// trajectories differ in length or indices.
std::vector<PoseErrorPair> pose_errors(const Trajectory& estimated, const Trajectory& ground_truth);

// Rigid (rotation + translation, no scale) alignment of the estimated
// positions onto the ground truth, applied to the whole estimated poses.
Trajectory align_trajectory(const Trajectory& estimated, const Trajectory& ground_truth);

struct AteStats {
  double rmse = 0.0;
  double std = 0.0;  // population
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Throws kInvalidArgument on an empty list.
AteStats ate_statistics(std::span<const double> errors);

// Fraction with translation < trans_thresh and rotation < rot_thresh_deg.
double recall_at(std::span<const PoseErrorPair> pairs, double trans_thresh, double rot_thresh_deg);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;  // edges.size() - 1 bins, [e_i, e_i+1)
  std::size_t overflow = 0;         // values outside [edges.front(), edges.back())
};

Histogram error_histogram(std::span<const double> values, std::span<const double> edges);

struct StageTiming {
  double mean_ms = 0.0;
  std::size_t count = 0;
};

struct TimingReport {
  StageTiming detect;
  StageTiming match;
  StageTiming pnp;
  StageTiming render;
  double total_s = 0.0;
};

// Aggregates over all traces. A trace without total_ms contributes the sum
// of its stage times to the total. Throws kInvalidArgument when empty.
TimingReport timing_report(std::span<const IterationTrace> traces);

}  // namespace gsreloc
