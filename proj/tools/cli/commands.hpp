#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "gsreloc/reloc/relocalizer.hpp"
#include "gsreloc/scene/camera.hpp"
#include "gsreloc/scene/synthetic.hpp"

namespace gsreloc::cli {

namespace fs = std::filesystem;

struct SynthOptions {
  std::uint64_t seed = 0;
  SyntheticConfig synthetic;
  CameraIntrinsics camera;
  fs::path out;
  fs::path trajectory;  // empty: <out> with extension .poses.txt
  // Optional query set: perturbed trajectory poses rendered to <dir>/<id>.ppm
  // with ground truth in <dir>/ground_truth.txt (line k = query k).
  fs::path queries;
  int n_queries = 0;
  double offset_m = 0.5;
  double offset_deg = 5.0;
};

struct BuildAnchorsOptions {
  fs::path scene;
  fs::path trajectory;
  double spacing = kDefaultAnchorSpacing;
  CameraIntrinsics camera;
  fs::path out;
};

struct RelocalizeOptions {
  fs::path anchors;
  fs::path scene;
  fs::path queries;
  fs::path out;
  std::string matcher = "reference";  // reference | oracle | external
  fs::path matches_dir;               // external
  fs::path ground_truth;              // oracle
  OracleConfig oracle;
  std::uint64_t seed = 0;
  bool timings = false;
  RelocConfig reloc;
};

struct BatchSummary {
  std::size_t queries = 0;
  std::size_t converged = 0;
  std::size_t max_iterations = 0;
  std::size_t failed = 0;
};

struct EvaluateOptions {
  fs::path results;
  fs::path ground_truth;
  fs::path out;
  std::string seq = "seq";
  bool align = false;
};

// Each command throws gsreloc::Error for batch-level failures.
void cmd_synth(const SynthOptions& options, std::ostream& out);
void cmd_build_anchors(const BuildAnchorsOptions& options, std::ostream& out);
BatchSummary cmd_relocalize(const RelocalizeOptions& options, std::ostream& out);
void cmd_evaluate(const EvaluateOptions& options, std::ostream& out);

// Query id for trajectory index k.
std::string query_id(long long index);

}  // namespace gsreloc::cli
