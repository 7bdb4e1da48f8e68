#pragma once

#include <cstdint>

#include "gsreloc/random.hpp"
#include "gsreloc/reloc/relocalizer.hpp"
#include "gsreloc/scene/synthetic.hpp"

namespace gsreloc::testing {

// One synthetic relocalization problem: a scene, its anchor database, and a
// query pose offset from a randomly chosen anchor by a fixed translation
// distance and rotation angle along random directions.
struct RelocScenario {
  SplatScene scene;
  Trajectory trajectory;
  AnchorDatabase db;
  CameraIntrinsics cam;
  int start_anchor = 0;  // index into db.anchors
  Pose query_pose;
  Image query;
};

struct ScenarioConfig {
  SyntheticConfig synthetic;
  double spacing = kDefaultAnchorSpacing;
  double offset_m = 0.5;
  double offset_deg = 5.0;
};

// Scene seed and offset seed are both derived from `seed`.
RelocScenario make_scenario(std::uint64_t seed, const ScenarioConfig& config = {});

// Random unit vector from a seeded generator.
Vec3 random_unit(Rng& rng);

// Pose `offset_m` / `offset_deg` away from `base` along random directions.
Pose perturb(const Pose& base, double offset_m, double offset_deg, Rng& rng);

}  // namespace gsreloc::testing
