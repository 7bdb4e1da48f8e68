#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gsreloc/error.hpp"
#include "gsreloc/eval/metrics.hpp"
#include "gsreloc/random.hpp"
#include "gsreloc/reloc/anchor_io.hpp"
#include "gsreloc/reloc/result_io.hpp"
#include "gsreloc/render/rasterizer.hpp"
#include "gsreloc/scene/image.hpp"
#include "gsreloc/scene/splat_scene.hpp"
#include "gsreloc/scene/trajectory.hpp"
#include "json.hpp"

namespace gsreloc::cli {
namespace {

using Json = nlohmann::ordered_json;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, dir.string() + ": cannot create directory: " + ec.message());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(ErrorCode::kIo, path.string() + ": cannot write");
}

// Sorted files in `dir` with the given extension.
std::vector<fs::path> list_files(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::optional<long long> parse_index(const std::string& id) {
  if (id.empty() || !std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  try {
    return std::stoll(id);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

std::map<long long, Pose> index_poses(const Trajectory& t) {
  std::map<long long, Pose> m;
  for (const StampedPose& p : t) m[p.index] = p.pose;
  return m;
}

// External matcher that also drops the reference it is matched against next
// to the match files, so a wrapper script can run its own matcher on it.
class ExportingMatcher final : public Matcher {
 public:
  ExportingMatcher(fs::path dir, std::string id) : dir_(std::move(dir)), id_(id), inner_(dir_, std::move(id)) {}

  MatchOutput match(const Image& query, const AnchorRecord& reference, int iteration) const override {
    const std::string stem = id_ + "_iter" + std::to_string(iteration) + "_ref";
    write_ppm(dir_ / (stem + ".ppm"), reference.rgb);
    write_depth(dir_ / (stem + ".depth"), reference.depth);
    return inner_.match(query, reference, iteration);
  }

 private:
  fs::path dir_;
  std::string id_;
  ExternalFileMatcher inner_;
};

Json stage_json(const StageTiming& s) { return Json{{"mean_ms", s.mean_ms}, {"count", s.count}}; }

Json histogram_json(const Histogram& h) {
  return Json{{"edges", h.edges}, {"counts", h.counts}, {"overflow", h.overflow}};
}

std::vector<double> linspace_edges(double step, int bins) {
  std::vector<double> e;
  for (int i = 0; i <= bins; ++i) e.push_back(step * i);
  return e;
}

}  // namespace

std::string query_id(long long index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06lld", index);
  return buf;
}

void cmd_synth(const SynthOptions& o, std::ostream& out) {
  o.camera.validate();
  auto [scene, trajectory] = generate_synthetic_scene(o.seed, o.synthetic, o.camera);
  const fs::path traj_path = o.trajectory.empty() ? fs::path(o.out).replace_extension(".poses.txt") : o.trajectory;
  if (o.out.has_parent_path()) ensure_dir(o.out.parent_path());
  save_splat_file(o.out, scene);
  save_kitti_poses(traj_path, trajectory);
  out << "wrote " << scene.gaussians.size() << " gaussians to " << o.out.string() << " and "
      << trajectory.size() << " poses to " << traj_path.string() << "\n";

  if (o.n_queries <= 0) return;
  if (o.queries.empty()) throw Error(ErrorCode::kInvalidArgument, "--n-queries needs --queries");
  ensure_dir(o.queries);
  Rng rng(o.seed ^ 0x5bd1e995ULL);
  std::vector<Pose> gt;
  for (int k = 0; k < o.n_queries; ++k) {
    const Pose& base = trajectory[rng.index(trajectory.size())].pose;
    // Random directions for the translation and the rotation axis.
    Vec3 dir, axis;
    do {
      dir = Vec3(rng.normal(), rng.normal(), rng.normal());
    } while (dir.norm() < 1e-9);
    do {
      axis = Vec3(rng.normal(), rng.normal(), rng.normal());
    } while (axis.norm() < 1e-9);
    const Quat dq(Eigen::AngleAxisd(o.offset_deg * std::numbers::pi / 180.0, axis.normalized()));
    const Pose pose(base.rotation() * dq, base.translation() + o.offset_m * dir.normalized());
    write_ppm(o.queries / (query_id(k) + ".ppm"), render(scene, pose, o.camera).rgb);
    gt.push_back(pose);
  }
  save_kitti_poses(o.queries / "ground_truth.txt", Trajectory::FromPoses(gt));
  out << "wrote " << o.n_queries << " queries to " << o.queries.string() << "\n";
}

void cmd_build_anchors(const BuildAnchorsOptions& o, std::ostream& out) {
  o.camera.validate();
  const SplatScene scene = load_splat_file(o.scene);
  const Trajectory trajectory = load_kitti_poses(o.trajectory);
  const AnchorDatabase db = build_anchor_db(scene, trajectory, o.camera, o.spacing);
  save_anchor_db(o.out, db);
  out << "wrote " << db.anchors.size() << " anchors to " << o.out.string() << "\n";
}

BatchSummary cmd_relocalize(const RelocalizeOptions& o, std::ostream& out) {
  if (o.matcher != "reference" && o.matcher != "oracle" && o.matcher != "external") {
    throw Error(ErrorCode::kInvalidArgument, "unknown matcher '" + o.matcher + "'");
  }
  if (o.matcher == "external" && o.matches_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--matcher external needs --matches-dir");
  }
  if (o.matcher == "oracle" && o.ground_truth.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--matcher oracle needs --ground-truth");
  }
  const AnchorDatabase db = load_anchor_db(o.anchors);
  const SplatScene scene = load_splat_file(o.scene);
  const std::map<long long, Pose> gt =
      o.ground_truth.empty() ? std::map<long long, Pose>{} : index_poses(load_kitti_poses(o.ground_truth));
  const auto queries = list_files(o.queries, ".ppm");
  ensure_dir(o.out);

  RelocConfig reloc = o.reloc;
  reloc.pnp.ransac.seed = o.seed;
  BatchSummary summary;
  for (std::size_t k = 0; k < queries.size(); ++k) {
    QueryResult qr;
    qr.query_id = queries[k].stem().string();
    try {
      const Image query = read_ppm(queries[k]);
      if (o.matcher == "reference") {
        qr.result = relocalize(query, db, scene, db.camera, ReferenceMatcher(), reloc);
      } else if (o.matcher == "external") {
        qr.result = relocalize(query, db, scene, db.camera, ExportingMatcher(o.matches_dir, qr.query_id), reloc);
      } else {
        const auto index = parse_index(qr.query_id);
        if (!index || !gt.count(*index)) {
          throw Error(ErrorCode::kInvalidArgument, "no ground-truth pose for query " + qr.query_id);
        }
        OracleConfig oc = o.oracle;
        oc.seed = o.seed + k;
        qr.result = relocalize(query, db, scene, db.camera, OracleMatcher(gt.at(*index), scene, db.camera, oc), reloc);
      }
    } catch (const Error& e) {
      // A query that cannot even start is recorded and the batch goes on.
      qr.result = RelocalizationResult{};
      qr.result.status = RelocStatus::kFailed;
      qr.result.failure = e.code();
      qr.result.failure_message = e.what();
    }
    save_result(o.out / (qr.query_id + ".json"), qr, o.timings);
    ++summary.queries;
    switch (qr.result.status) {
      case RelocStatus::kConverged: ++summary.converged; break;
      case RelocStatus::kMaxIterations: ++summary.max_iterations; break;
      case RelocStatus::kFailed: ++summary.failed; break;
    }
  }
  out << "relocalized " << summary.queries << " queries: " << summary.converged << " converged, "
      << summary.max_iterations << " max_iterations, " << summary.failed << " failed\n";
  return summary;
}

void cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const std::map<long long, Pose> gt = index_poses(load_kitti_poses(o.ground_truth));
  std::map<long long, QueryResult> results;
  for (const fs::path& file : list_files(o.results, ".json")) {
    QueryResult qr = load_result(file);
    const auto index = parse_index(qr.query_id);
    if (!index || !gt.count(*index)) {
      throw Error(ErrorCode::kInvalidArgument, file.string() + ": no ground-truth pose for query " + qr.query_id);
    }
    results.emplace(*index, std::move(qr));
  }
  if (results.empty()) throw Error(ErrorCode::kInvalidArgument, o.results.string() + ": no result files");

  Trajectory estimated, truth;
  std::vector<IterationTrace> traces;
  std::size_t converged = 0;
  for (const auto& [index, qr] : results) {
    estimated.push_back(index, qr.result.pose);
    truth.push_back(index, gt.at(index));
    traces.insert(traces.end(), qr.result.traces.begin(), qr.result.traces.end());
    converged += qr.result.status == RelocStatus::kConverged;
  }
  if (o.align) estimated = align_trajectory(estimated, truth);
  const auto pairs = pose_errors(estimated, truth);
  std::vector<double> trans, rot;
  for (const PoseErrorPair& p : pairs) {
    trans.push_back(p.translation_error);
    rot.push_back(p.rotation_error);
  }
  ensure_dir(o.out);

  const AteStats ate = ate_statistics(trans);
  std::ostringstream csv;
  csv << std::setprecision(9) << "seq,rmse,std,mean,median,min,max\n"
      << o.seq << ',' << ate.rmse << ',' << ate.std << ',' << ate.mean << ',' << ate.median << ',' << ate.min << ','
      << ate.max << '\n';
  write_file(o.out / "ate.csv", csv.str());

  const double headline = recall_at(pairs, 0.10, 1.0);
  Json sweep = Json::array();
  for (const auto& [t, r] : std::vector<std::pair<double, double>>{
           {0.01, 0.1}, {0.02, 0.2}, {0.05, 0.5}, {0.10, 1.0}, {0.20, 2.0}, {0.50, 5.0}, {1.00, 10.0}}) {
    sweep.push_back(Json{{"translation_m", t}, {"rotation_deg", r}, {"recall", recall_at(pairs, t, r)}});
  }
  const Json recall{{"queries", pairs.size()},
                    {"converged", converged},
                    {"translation_m", 0.10},
                    {"rotation_deg", 1.0},
                    {"recall", headline},
                    {"sweep", sweep}};
  write_file(o.out / "recall.json", recall.dump(2) + "\n");

  const Json hist{{"translation_m", histogram_json(error_histogram(trans, linspace_edges(0.025, 20)))},
                  {"rotation_deg", histogram_json(error_histogram(rot, linspace_edges(0.25, 20)))}};
  write_file(o.out / "histograms.json", hist.dump(2) + "\n");

  if (!traces.empty()) {
    const TimingReport t = timing_report(traces);
    const Json timing{{"detect", stage_json(t.detect)},
                      {"match", stage_json(t.match)},
                      {"pnp", stage_json(t.pnp)},
                      {"render", stage_json(t.render)},
                      {"total_s", t.total_s}};
    write_file(o.out / "timing.json", timing.dump(2) + "\n");
  }

  out << std::setprecision(6) << "evaluated " << pairs.size() << " queries: rmse " << ate.rmse
      << " m, recall@(0.10 m, 1 deg) " << headline << "\n";
}

}  // namespace gsreloc::cli
