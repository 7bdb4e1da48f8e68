#pragma once

#include <string>

#include <json.hpp>

#include "gsreloc/error.hpp"
#include "gsreloc/scene/pose.hpp"

namespace gsreloc::detail {

using nlohmann::json;

inline json pose_to_json(const Pose& p) {
  const Quat& q = p.rotation();
  const Vec3& t = p.translation();
  return json::array({q.w(), q.x(), q.y(), q.z(), t.x(), t.y(), t.z()});
}

inline Pose pose_from_json(const json& j) {
  if (!j.is_array() || j.size() != 7) throw Error(ErrorCode::kParse, "pose must be an array of 7 numbers");
  double v[7];
  for (int i = 0; i < 7; ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kParse, "pose entries must be numbers");
    v[i] = j[i].get<double>();
  }
  const Quat q(v[0], v[1], v[2], v[3]);
  if (!(q.norm() > 0.0)) throw Error(ErrorCode::kParse, "pose quaternion has zero norm");
  return Pose(q, Vec3(v[4], v[5], v[6]));
}

// Parse wrapper that maps nlohmann exceptions to kParse with context.
template <typename F>
auto with_parse_context(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, context + ": " + e.what());
  }
}

}  // namespace gsreloc::detail
