#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gsreloc/features/detector.hpp"
#include "gsreloc/features/matching.hpp"
#include "gsreloc/features/oracle.hpp"

namespace gsreloc {

struct MatchOutput {
  std::vector<FeatureMatch> matches;
  // Wall time of each stage in milliseconds; nullopt if the stage did not run.
  std::optional<double> detect_ms;
  std::optional<double> match_ms;
};

// Query-vs-reference matcher used by the relocalization loop. `iteration`
// starts at 1.
class Matcher {
 public:
  virtual ~Matcher() = default;
  virtual MatchOutput match(const Image& query, const AnchorRecord& reference,
                            int iteration) const = 0;
};

class ReferenceMatcher final : public Matcher {
 public:
  explicit ReferenceMatcher(DetectorConfig detector = {}, MatcherConfig matcher = {})
      : detector_(std::move(detector)), matcher_(matcher) {}

  MatchOutput match(const Image& query, const AnchorRecord& reference, int iteration) const override;

 private:
  DetectorConfig detector_;
  MatcherConfig matcher_;
};

// Wraps oracle_match; ignores the query pixels and uses the known pose.
class OracleMatcher final : public Matcher {
 public:
  OracleMatcher(const Pose& query_pose_gt, const SplatScene& scene, const CameraIntrinsics& cam,
                OracleConfig config)
      : query_pose_gt_(query_pose_gt), scene_(scene), cam_(cam), config_(config) {}

  MatchOutput match(const Image& query, const AnchorRecord& reference, int iteration) const override;

 private:
  Pose query_pose_gt_;
  const SplatScene& scene_;
  CameraIntrinsics cam_;
  OracleConfig config_;
};

// Reads `<dir>/<query_id>_iter<k>.matches` for iteration k.
class ExternalFileMatcher final : public Matcher {
 public:
  ExternalFileMatcher(std::filesystem::path dir, std::string query_id)
      : dir_(std::move(dir)), query_id_(std::move(query_id)) {}

  MatchOutput match(const Image& query, const AnchorRecord& reference, int iteration) const override;

  std::filesystem::path path_for(int iteration) const;

 private:
  std::filesystem::path dir_;
  std::string query_id_;
};

}  // namespace gsreloc
