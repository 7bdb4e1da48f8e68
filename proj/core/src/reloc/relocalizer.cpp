#include "gsreloc/reloc/relocalizer.hpp"

#include <chrono>

#include "gsreloc/features/matching.hpp"
#include "gsreloc/reloc/lifting.hpp"

namespace gsreloc {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_inputs(const Image& query, const CameraIntrinsics& cam, const RelocConfig& config) {
  cam.validate();
  if (query.width() != cam.width || query.height() != cam.height) {
    throw Error(ErrorCode::kCameraMismatch, "query image is " + std::to_string(query.width()) + "x" +
                                                std::to_string(query.height()) + ", camera expects " +
                                                std::to_string(cam.width) + "x" + std::to_string(cam.height));
  }
  if (config.max_iters < 1 || !(config.trans_eps > 0.0) || !(config.rot_eps > 0.0) ||
      config.min_matches < 0) {
    throw Error(ErrorCode::kInvalidArgument, "relocalizer config out of range");
  }
}

}  // namespace

std::string to_string(RelocStatus status) {
  switch (status) {
    case RelocStatus::kConverged: return "converged";
    case RelocStatus::kMaxIterations: return "max_iterations";
    case RelocStatus::kFailed: return "failed";
  }
  return "unknown";
}

RelocStatus reloc_status_from_string(const std::string& name) {
  if (name == "converged") return RelocStatus::kConverged;
  if (name == "max_iterations") return RelocStatus::kMaxIterations;
  if (name == "failed") return RelocStatus::kFailed;
  throw Error(ErrorCode::kParse, "unknown relocalization status '" + name + "'");
}

RelocalizationResult relocalize(const Image& query, const AnchorDatabase& db, const SplatScene& scene,
                                const CameraIntrinsics& cam, const Matcher& matcher,
                                const RelocConfig& config) {
  if (db.anchors.empty()) throw Error(ErrorCode::kEmptyDatabase, "relocalize: anchor database is empty");
  if (!(db.camera == cam)) throw Error(ErrorCode::kCameraMismatch, "relocalize: camera differs from the database camera");
  check_inputs(query, cam, config);
  return relocalize_from(query, retrieve(query, db), scene, cam, matcher, config);
}

RelocalizationResult relocalize_from(const Image& query, const AnchorRecord& start,
                                     const SplatScene& scene, const CameraIntrinsics& cam,
                                     const Matcher& matcher, const RelocConfig& config) {
  check_inputs(query, cam, config);
  RelocalizationResult result;
  result.anchor_id = start.id;
  result.pose = start.pose;
  result.status = RelocStatus::kMaxIterations;

  const ImageSize query_size{query.width(), query.height()};
  AnchorRecord reference;
  for (int it = 1; it <= config.max_iters; ++it) {
    const auto iter_start = Clock::now();
    IterationTrace trace;
    trace.iteration = it;
    trace.pose = result.pose;
    const AnchorRecord* ref = &start;
    try {
      if (it > 1) {
        const auto t0 = Clock::now();
        RenderOutput r = render(scene, result.pose, cam, config.render);
        reference.id = start.id;
        reference.pose = result.pose;
        reference.rgb = std::move(r.rgb);
        reference.depth = std::move(r.depth);
        trace.render_ms = ms_since(t0);
        ref = &reference;
      }
      MatchOutput m = matcher.match(query, *ref, it);
      trace.detect_ms = m.detect_ms;
      trace.match_ms = m.match_ms;
      const MatchStats stats = match_stats(m.matches, query_size);
      trace.match_count = stats.count;
      trace.mean_confidence = stats.mean_confidence;
      trace.uniformity = stats.uniformity;
      if (stats.count < static_cast<std::size_t>(config.min_matches)) {
        throw Error(ErrorCode::kInsufficientMatches, "iteration " + std::to_string(it) + ": " +
                                                         std::to_string(stats.count) + " matches, " +
                                                         std::to_string(config.min_matches) + " required");
      }
      const auto t0 = Clock::now();
      const auto corrs = lift_to_3d(m.matches, *ref, cam);
      const SolverReport report = solve_pnp(corrs, cam, config.pnp);
      trace.pnp_ms = ms_since(t0);
      trace.delta = pose_delta(result.pose, report.pose);
      trace.pose = report.pose;
      result.pose = report.pose;
    } catch (const Error& e) {
      trace.total_ms = ms_since(iter_start);
      result.traces.push_back(std::move(trace));
      result.status = RelocStatus::kFailed;
      result.failure = e.code();
      result.failure_message = e.what();
      return result;
    }
    trace.total_ms = ms_since(iter_start);
    const bool done = trace.delta->translation <= config.trans_eps && trace.delta->rotation <= config.rot_eps;
    result.traces.push_back(std::move(trace));
    if (done) {
      result.status = RelocStatus::kConverged;
      break;
    }
  }
  return result;
}

}  // namespace gsreloc
