#include "gsreloc/scene/splat_scene.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "gsreloc/error.hpp"
#include "text_util.hpp"

namespace gsreloc {
namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

std::string record_context(std::size_t index) {
  return "record " + std::to_string(index);
}

}  // namespace

Mat3 Gaussian3D::covariance() const {
  const Mat3 r = rotation.normalized().toRotationMatrix();
  return r * scale.cwiseAbs2().asDiagonal() * r.transpose();
}

void validate_gaussian(const Gaussian3D& g, std::size_t index) {
  if (!g.mean.allFinite() || !g.rotation.coeffs().allFinite() || !g.scale.allFinite() ||
      !std::isfinite(g.opacity) || !g.color.allFinite()) {
    throw Error(ErrorCode::kOutOfBounds, record_context(index) + ": non-finite value");
  }
  if (std::abs(g.rotation.norm() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kOutOfBounds, record_context(index) + ": quaternion is not unit norm");
  }
  if ((g.scale.array() <= 0.0).any()) {
    throw Error(ErrorCode::kOutOfBounds, record_context(index) + ": scale must be positive");
  }
  if (!(g.opacity > 0.0 && g.opacity <= 1.0)) {
    throw Error(ErrorCode::kOutOfBounds, record_context(index) + ": opacity outside (0, 1]");
  }
  if (!in_unit(g.color.x()) || !in_unit(g.color.y()) || !in_unit(g.color.z())) {
    throw Error(ErrorCode::kOutOfBounds, record_context(index) + ": color outside [0, 1]");
  }
}

void validate_scene(const SplatScene& scene) {
  for (int c = 0; c < 3; ++c) {
    if (!in_unit(scene.sky_color[c])) {
      throw Error(ErrorCode::kOutOfBounds, "sky color outside [0, 1]");
    }
  }
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) validate_gaussian(scene.gaussians[i], i);
}

SplatScene load_splat_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open splat file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "empty splat file " + path.string());
  const auto header = detail::split_ws(line);
  if (header.size() != 3 || header[0] != "gsplat" || header[1] != "v1") {
    throw Error(ErrorCode::kParse, "malformed header, expected 'gsplat v1 <count>'");
  }
  const auto count = detail::parse_int(header[2]);
  if (!count || *count < 0) throw Error(ErrorCode::kParse, "malformed header record count");

  SplatScene scene;
  scene.gaussians.reserve(static_cast<std::size_t>(*count));
  std::size_t index = 0;
  bool seen_record = false;
  while (std::getline(in, line)) {
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "sky") {
      if (seen_record || tokens.size() != 4) {
        throw Error(ErrorCode::kParse, "malformed sky line, expected 'sky r g b' before records");
      }
      for (int c = 0; c < 3; ++c) {
        const auto v = detail::parse_double(tokens[c + 1]);
        if (!v || !std::isfinite(*v)) throw Error(ErrorCode::kParse, "non-finite sky color value");
        scene.sky_color[c] = *v;
      }
      continue;
    }
    seen_record = true;
    if (tokens.size() != 14) {
      throw Error(ErrorCode::kParse, record_context(index) + ": expected 14 fields, found " +
                                         std::to_string(tokens.size()));
    }
    double f[14];
    for (int k = 0; k < 14; ++k) {
      const auto v = detail::parse_double(tokens[k]);
      if (!v) throw Error(ErrorCode::kParse, record_context(index) + ": unparsable number");
      if (!std::isfinite(*v)) throw Error(ErrorCode::kParse, record_context(index) + ": non-finite value");
      f[k] = *v;
    }
    Gaussian3D g;
    g.mean = Vec3(f[0], f[1], f[2]);
    const Quat q(f[3], f[4], f[5], f[6]);
    if (q.norm() == 0.0) throw Error(ErrorCode::kParse, record_context(index) + ": zero quaternion");
    g.rotation = q.normalized();
    g.scale = Vec3(f[7], f[8], f[9]);
    g.opacity = f[10];
    g.color = Vec3(f[11], f[12], f[13]);
    validate_gaussian(g, index);
    scene.gaussians.push_back(g);
    ++index;
  }
  if (static_cast<long long>(index) != *count) {
    throw Error(ErrorCode::kParse, "header declares " + std::to_string(*count) +
                                       " records but file contains " + std::to_string(index));
  }
  validate_scene(scene);
  return scene;
}

void save_splat_file(const std::filesystem::path& path, const SplatScene& scene) {
  validate_scene(scene);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  using detail::format_double;
  out << "gsplat v1 " << scene.gaussians.size() << '\n';
  out << "sky " << format_double(scene.sky_color.x()) << ' ' << format_double(scene.sky_color.y())
      << ' ' << format_double(scene.sky_color.z()) << '\n';
  for (const Gaussian3D& g : scene.gaussians) {
    const double f[14] = {g.mean.x(),  g.mean.y(),     g.mean.z(),     g.rotation.w(), g.rotation.x(),
                          g.rotation.y(), g.rotation.z(), g.scale.x(), g.scale.y(),    g.scale.z(),
                          g.opacity,   g.color.x(),    g.color.y(),    g.color.z()};
    for (int k = 0; k < 14; ++k) {
      if (k) out << ' ';
      out << format_double(f[k]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace gsreloc
