#include "cli.hpp"

#include <memory>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gsreloc/error.hpp"
#include "json_config.hpp"

namespace gsreloc::cli {
namespace {

void add_camera_options(CLI::App* app, CameraIntrinsics& cam) {
  app->add_option("--fx", cam.fx, "Focal length x (px)")->capture_default_str();
  app->add_option("--fy", cam.fy, "Focal length y (px)")->capture_default_str();
  app->add_option("--cx", cam.cx, "Principal point x (px)")->capture_default_str();
  app->add_option("--cy", cam.cy, "Principal point y (px)")->capture_default_str();
  app->add_option("--width", cam.width, "Image width (px)")->capture_default_str();
  app->add_option("--height", cam.height, "Image height (px)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gsreloc: monocular relocalization against Gaussian splat maps"};
  app.name("gsreloc");
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values, one object per subcommand");

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic splat scene, trajectory and queries");
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--n", synth.synthetic.n_gaussians, "Number of Gaussians")->capture_default_str();
  s->add_option("--extent", synth.synthetic.extent, "Half-size of the Gaussian box (m)")->capture_default_str();
  s->add_option("--length", synth.synthetic.trajectory_length, "Trajectory length (m)")->capture_default_str();
  s->add_option("--step", synth.synthetic.anchor_spacing, "Distance between trajectory poses (m)")
      ->capture_default_str();
  s->add_option("--out", synth.out, "Scene file to write")->required();
  s->add_option("--trajectory", synth.trajectory, "Trajectory file (default: <out>.poses.txt)");
  s->add_option("--queries", synth.queries, "Directory for query images and ground_truth.txt");
  s->add_option("--n-queries", synth.n_queries, "Number of query images")->capture_default_str();
  s->add_option("--offset-m", synth.offset_m, "Query offset from the trajectory (m)")->capture_default_str();
  s->add_option("--offset-deg", synth.offset_deg, "Query rotation offset (deg)")->capture_default_str();
  add_camera_options(s, synth.camera);

  BuildAnchorsOptions build;
  auto* b = app.add_subcommand("build-anchors", "Render the anchor database along a trajectory");
  b->add_option("--scene", build.scene, "Splat scene file")->required();
  b->add_option("--trajectory", build.trajectory, "KITTI pose file")->required();
  b->add_option("--spacing", build.spacing, "Minimum distance between anchors (m)")->capture_default_str();
  b->add_option("--out", build.out, "Output directory")->required();
  add_camera_options(b, build.camera);

  RelocalizeOptions reloc;
  auto* r = app.add_subcommand("relocalize", "Relocalize every query image in a directory");
  r->add_option("--anchors", reloc.anchors, "Anchor database directory")->required();
  r->add_option("--scene", reloc.scene, "Splat scene file")->required();
  r->add_option("--queries", reloc.queries, "Directory of query .ppm images")->required();
  r->add_option("--out", reloc.out, "Output directory for per-query JSON")->required();
  r->add_option("--matcher", reloc.matcher, "reference | oracle | external")
      ->check(CLI::IsMember({"reference", "oracle", "external"}))
      ->capture_default_str();
  r->add_option("--matches-dir", reloc.matches_dir, "Match files <id>_iter<k>.matches (external matcher)");
  r->add_option("--ground-truth", reloc.ground_truth, "KITTI poses of the queries (oracle matcher)");
  r->add_option("--oracle-n", reloc.oracle.n, "Oracle samples per iteration")->capture_default_str();
  r->add_option("--oracle-noise", reloc.oracle.pixel_noise_sigma, "Oracle pixel noise sigma (px)")
      ->capture_default_str();
  r->add_option("--oracle-outliers", reloc.oracle.outlier_fraction, "Oracle outlier fraction")
      ->capture_default_str();
  r->add_option("--seed", reloc.seed, "Seed for RANSAC and the oracle")->capture_default_str();
  r->add_flag("--timings", reloc.timings, "Write per-stage wall times into the result JSON");
  r->add_option("--max-iters", reloc.reloc.max_iters, "Iteration limit")->capture_default_str();
  r->add_option("--trans-eps", reloc.reloc.trans_eps, "Convergence threshold (m)")->capture_default_str();
  r->add_option("--rot-eps", reloc.reloc.rot_eps, "Convergence threshold (rad)")->capture_default_str();
  r->add_option("--min-matches", reloc.reloc.min_matches, "Matches required per iteration")
      ->capture_default_str();
  r->add_option("--ransac-iters", reloc.reloc.pnp.ransac.iters, "RANSAC iterations")->capture_default_str();
  r->add_option("--threshold-px", reloc.reloc.pnp.ransac.threshold_px, "RANSAC inlier threshold (px)")
      ->capture_default_str();

  EvaluateOptions eval;
  auto* e = app.add_subcommand("evaluate", "Compute ATE, recall, histograms and timings");
  e->add_option("--results", eval.results, "Directory of result JSON files")->required();
  e->add_option("--ground-truth", eval.ground_truth, "KITTI poses of the queries")->required();
  e->add_option("--out", eval.out, "Report directory")->required();
  e->add_option("--seq", eval.seq, "Sequence name for the CSV row")->capture_default_str();
  e->add_flag("--align", eval.align, "Rigidly align the estimates to the ground truth first");

  std::vector<const char*> argv{"gsreloc"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  try {
    if (*s) cmd_synth(synth, out);
    if (*b) cmd_build_anchors(build, out);
    if (*r) cmd_relocalize(reloc, out);
    if (*e) cmd_evaluate(eval, out);
  } catch (const Error& ex) {
    err << "error [" << to_string(ex.code()) << "]: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gsreloc::cli
