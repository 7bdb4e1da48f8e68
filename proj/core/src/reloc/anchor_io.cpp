#include "gsreloc/reloc/anchor_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace gsreloc {
namespace {

using detail::json;

std::string anchor_stem(int id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "anchor_%06d", id);
  return buf;
}

json camera_to_json(const CameraIntrinsics& c) {
  return {{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy},
          {"width", c.width}, {"height", c.height}, {"near", c.near}};
}

CameraIntrinsics camera_from_json(const json& j) {
  CameraIntrinsics c;
  c.fx = j.at("fx").get<double>();
  c.fy = j.at("fy").get<double>();
  c.cx = j.at("cx").get<double>();
  c.cy = j.at("cy").get<double>();
  c.width = j.at("width").get<int>();
  c.height = j.at("height").get<int>();
  c.near = j.at("near").get<double>();
  return c;
}

}  // namespace

void save_anchor_db(const std::filesystem::path& dir, const AnchorDatabase& db) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  json anchors = json::array();
  for (const AnchorRecord& a : db.anchors) {
    const std::string stem = anchor_stem(a.id);
    write_ppm(dir / (stem + ".ppm"), a.rgb);
    write_depth(dir / (stem + ".depth"), a.depth);
    anchors.push_back({{"id", a.id},
                       {"pose", detail::pose_to_json(a.pose)},
                       {"rgb", stem + ".ppm"},
                       {"depth", stem + ".depth"},
                       {"descriptor", a.descriptor}});
  }
  const json index = {{"format", "gsreloc-anchors"},
                      {"version", 1},
                      {"camera", camera_to_json(db.camera)},
                      {"spacing", db.spacing},
                      {"anchors", std::move(anchors)}};
  const auto path = dir / "index.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << index.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

AnchorDatabase load_anchor_db(const std::filesystem::path& dir) {
  const auto path = dir / "index.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return detail::with_parse_context(path.string(), [&] {
    const json index = json::parse(ss.str());
    if (index.value("format", std::string()) != "gsreloc-anchors" || index.value("version", 0) != 1) {
      throw Error(ErrorCode::kParse, path.string() + ": not a version 1 anchor index");
    }
    AnchorDatabase db;
    db.camera = camera_from_json(index.at("camera"));
    db.camera.validate();
    db.spacing = index.at("spacing").get<double>();
    std::set<int> ids;
    for (const json& j : index.at("anchors")) {
      AnchorRecord a;
      a.id = j.at("id").get<int>();
      if (!ids.insert(a.id).second) {
        throw Error(ErrorCode::kParse, path.string() + ": duplicate anchor id " + std::to_string(a.id));
      }
      a.pose = detail::pose_from_json(j.at("pose"));
      a.rgb = read_ppm(dir / j.at("rgb").get<std::string>());
      a.depth = read_depth(dir / j.at("depth").get<std::string>());
      a.descriptor = j.at("descriptor").get<std::vector<double>>();
      if (a.rgb.width() != db.camera.width || a.rgb.height() != db.camera.height ||
          a.depth.width() != db.camera.width || a.depth.height() != db.camera.height) {
        throw Error(ErrorCode::kCameraMismatch,
                    path.string() + ": anchor " + std::to_string(a.id) + " images do not match the camera");
      }
      db.anchors.push_back(std::move(a));
    }
    if (db.anchors.empty()) throw Error(ErrorCode::kEmptyDatabase, path.string() + ": no anchors");
    return db;
  });
}

}  // namespace gsreloc
