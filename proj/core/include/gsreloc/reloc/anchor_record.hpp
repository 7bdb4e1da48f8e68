#pragma once

#include <vector>

#include "gsreloc/scene/image.hpp"
#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

using GlobalDescriptor = std::vector<double>;

// A rendered reference view: the stored anchors of the database, and the
// re-renders produced during iterative refinement (which carry the id of the
// anchor they started from and an empty descriptor).
struct AnchorRecord {
  int id = 0;
  Pose pose;
  Image rgb;    // H x W x 3
  Image depth;  // H x W, meters, 0 = sky
  GlobalDescriptor descriptor;
};

}  // namespace gsreloc
