#include "gsreloc/features/matcher.hpp"

#include <chrono>
#include <string>

#include "gsreloc/error.hpp"
#include "gsreloc/features/match_io.hpp"

namespace gsreloc {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

MatchOutput ReferenceMatcher::match(const Image& query, const AnchorRecord& reference, int) const {
  MatchOutput out;
  auto start = Clock::now();
  const auto kps_query = detect_and_describe(query, detector_);
  const auto kps_ref = detect_and_describe(reference.rgb, detector_);
  out.detect_ms = ms_since(start);
  start = Clock::now();
  out.matches = match_features(kps_query, kps_ref, matcher_);
  out.match_ms = ms_since(start);
  return out;
}

MatchOutput OracleMatcher::match(const Image&, const AnchorRecord& reference, int) const {
  MatchOutput out;
  const auto start = Clock::now();
  out.matches = oracle_match(query_pose_gt_, reference, scene_, cam_, config_).matches;
  out.match_ms = ms_since(start);
  return out;
}

std::filesystem::path ExternalFileMatcher::path_for(int iteration) const {
  return dir_ / (query_id_ + "_iter" + std::to_string(iteration) + ".matches");
}

MatchOutput ExternalFileMatcher::match(const Image& query, const AnchorRecord& reference,
                                       int iteration) const {
  const auto path = path_for(iteration);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "missing external match file " + path.string());
  }
  MatchOutput out;
  const auto start = Clock::now();
  MatchFile file = load_external_matches(path);
  if (file.query_size != ImageSize{query.width(), query.height()} ||
      file.ref_size != ImageSize{reference.rgb.width(), reference.rgb.height()}) {
    throw Error(ErrorCode::kCameraMismatch, path.string() + ": declared image sizes do not match");
  }
  out.matches = std::move(file.matches);
  out.match_ms = ms_since(start);
  return out;
}

}  // namespace gsreloc
