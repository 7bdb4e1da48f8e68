#pragma once

#include <span>

#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

// Closed-form rigid transform (scale fixed to 1) minimizing
// sum |b_i - (R a_i + t)|^2, with det(R) = +1. The returned pose maps
// points of `a` onto `b`.
//
// Throws kInvalidArgument on a length mismatch and kDegenerate for fewer
// than three points or a collinear configuration.
Pose umeyama_align(std::span<const Vec3> points_a, std::span<const Vec3> points_b);

}  // namespace gsreloc
