#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsreloc/error.hpp"
#include "gsreloc/features/matcher.hpp"
#include "gsreloc/pose/pnp.hpp"
#include "gsreloc/reloc/anchors.hpp"

namespace gsreloc {

struct RelocConfig {
  int max_iters = 10;
  double trans_eps = 0.01;  // meters
  double rot_eps = 0.01;    // radians
  int min_matches = 12;
  PnpConfig pnp;
  RenderConfig render;
};

struct IterationTrace {
  int iteration = 0;  // from 1
  Pose pose;
  std::size_t match_count = 0;
  double mean_confidence = 0.0;
  double uniformity = 0.0;
  // Change against the previous estimate; nullopt when the iteration failed
  // before producing one.
  std::optional<PoseDelta> delta;
  // Milliseconds; nullopt for stages that did not run (no render on the
  // first iteration, no detect for the oracle matcher).
  std::optional<double> detect_ms;
  std::optional<double> match_ms;
  std::optional<double> pnp_ms;
  std::optional<double> render_ms;
  std::optional<double> total_ms;
};

enum class RelocStatus { kConverged, kMaxIterations, kFailed };

std::string to_string(RelocStatus status);
RelocStatus reloc_status_from_string(const std::string& name);

struct RelocalizationResult {
  Pose pose;
  RelocStatus status = RelocStatus::kFailed;
  std::optional<ErrorCode> failure;
  std::string failure_message;
  std::vector<IterationTrace> traces;
  int anchor_id = -1;
};

// Retrieve once, then iterate render -> match -> lift -> solve_pnp from the
// anchor pose. The first iteration matches against the stored anchor render.
// Stops when the pose change is within both trans_eps and rot_eps
// (converged) or after max_iters. An iteration with fewer than min_matches
// matches or a matcher/solver error ends the run as failed, returning the
// latest estimate. Throws kEmptyDatabase and kCameraMismatch up front.
RelocalizationResult relocalize(const Image& query, const AnchorDatabase& db, const SplatScene& scene,
                                const CameraIntrinsics& cam, const Matcher& matcher,
                                const RelocConfig& config = {});

// Same loop with the retrieval step replaced by a given starting reference.
RelocalizationResult relocalize_from(const Image& query, const AnchorRecord& start,
                                     const SplatScene& scene, const CameraIntrinsics& cam,
                                     const Matcher& matcher, const RelocConfig& config = {});

}  // namespace gsreloc
