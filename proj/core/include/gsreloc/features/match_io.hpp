#pragma once

#include <filesystem>
#include <vector>

#include "gsreloc/features/types.hpp"

namespace gsreloc {

// Match-exchange file:
//   matches v1 <query_w> <query_h> <ref_w> <ref_h> <count>
//   uq vq ur vr confidence        (count lines)
struct MatchFile {
  ImageSize query_size;
  ImageSize ref_size;
  std::vector<FeatureMatch> matches;
};

MatchFile load_external_matches(const std::filesystem::path& path);
void save_external_matches(const std::filesystem::path& path, const MatchFile& file);

}  // namespace gsreloc
