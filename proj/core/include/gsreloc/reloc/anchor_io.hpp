#pragma once

#include <filesystem>

#include "gsreloc/reloc/anchors.hpp"

namespace gsreloc {

// Directory layout: index.json (camera, spacing, and per anchor its id, pose,
// descriptor and file names) plus anchor_<id>.ppm and anchor_<id>.depth.
void save_anchor_db(const std::filesystem::path& dir, const AnchorDatabase& db);
AnchorDatabase load_anchor_db(const std::filesystem::path& dir);

}  // namespace gsreloc
