#include "gsreloc/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "gsreloc/error.hpp"
#include "gsreloc/pose/absolute_orientation.hpp"

namespace gsreloc {
namespace {

void check_paired(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "trajectories have " + std::to_string(a.size()) + " and " +
                                                 std::to_string(b.size()) + " poses");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].index != b[i].index) {
      throw Error(ErrorCode::kInvalidArgument, "pose index mismatch at position " + std::to_string(i) +
                                                   ": " + std::to_string(a[i].index) + " vs " +
                                                   std::to_string(b[i].index));
    }
  }
}

void accumulate(StageTiming& s, const std::optional<double>& ms, double& sum) {
  if (!ms) return;
  ++s.count;
  sum += *ms;
}

}  // namespace

std::vector<PoseErrorPair> pose_errors(const Trajectory& estimated, const Trajectory& ground_truth) {
  check_paired(estimated, ground_truth);
  std::vector<PoseErrorPair> out;
  out.reserve(estimated.size());
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    const PoseDelta d = pose_delta(estimated[i].pose, ground_truth[i].pose);
    out.push_back({d.translation, d.rotation * 180.0 / std::numbers::pi});
  }
  return out;
}

Trajectory align_trajectory(const Trajectory& estimated, const Trajectory& ground_truth) {
  check_paired(estimated, ground_truth);
  std::vector<Vec3> a, b;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    a.push_back(estimated[i].pose.translation());
    b.push_back(ground_truth[i].pose.translation());
  }
  const Pose t = umeyama_align(a, b);
  Trajectory out;
  for (const StampedPose& sp : estimated) out.push_back(sp.index, t * sp.pose);
  return out;
}

AteStats ate_statistics(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorCode::kInvalidArgument, "ate_statistics: empty error list");
  const double n = static_cast<double>(errors.size());
  AteStats s;
  double sum = 0.0, sq = 0.0;
  for (double e : errors) {
    sum += e;
    sq += e * e;
  }
  s.mean = sum / n;
  s.rmse = std::sqrt(sq / n);
  double var = 0.0;
  for (double e : errors) var += (e - s.mean) * (e - s.mean);
  s.std = std::sqrt(var / n);
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

double recall_at(std::span<const PoseErrorPair> pairs, double trans_thresh, double rot_thresh_deg) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "recall_at: empty list");
  if (!(trans_thresh > 0.0) || !(rot_thresh_deg > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "recall_at: thresholds must be positive");
  }
  std::size_t hits = 0;
  for (const PoseErrorPair& p : pairs) {
    if (p.translation_error < trans_thresh && p.rotation_error < rot_thresh_deg) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

Histogram error_histogram(std::span<const double> values, std::span<const double> edges) {
  if (edges.size() < 2) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least 2 edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) {
      throw Error(ErrorCode::kInvalidArgument, "histogram edges must be strictly increasing");
    }
  }
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    if (!(v >= edges.front() && v < edges.back())) {
      ++h.overflow;
      continue;
    }
    // First edge strictly greater than v closes v's bin.
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  }
  return h;
}

TimingReport timing_report(std::span<const IterationTrace> traces) {
  if (traces.empty()) throw Error(ErrorCode::kInvalidArgument, "timing_report: no traces");
  TimingReport r;
  double detect = 0.0, match = 0.0, pnp = 0.0, render = 0.0, total_ms = 0.0;
  for (const IterationTrace& t : traces) {
    accumulate(r.detect, t.detect_ms, detect);
    accumulate(r.match, t.match_ms, match);
    accumulate(r.pnp, t.pnp_ms, pnp);
    accumulate(r.render, t.render_ms, render);
    total_ms += t.total_ms ? *t.total_ms
                           : t.detect_ms.value_or(0.0) + t.match_ms.value_or(0.0) + t.pnp_ms.value_or(0.0) +
                                 t.render_ms.value_or(0.0);
  }
  const auto mean = [](double sum, std::size_t n) { return n > 0 ? sum / static_cast<double>(n) : 0.0; };
  r.detect.mean_ms = mean(detect, r.detect.count);
  r.match.mean_ms = mean(match, r.match.count);
  r.pnp.mean_ms = mean(pnp, r.pnp.count);
  r.render.mean_ms = mean(render, r.render.count);
  r.total_s = total_ms / 1000.0;
  return r;
}

}  // namespace gsreloc
