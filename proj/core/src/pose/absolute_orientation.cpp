#include "gsreloc/pose/absolute_orientation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gsreloc/error.hpp"

namespace gsreloc {

Pose umeyama_align(std::span<const Vec3> points_a, std::span<const Vec3> points_b) {
  if (points_a.size() != points_b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "umeyama_align: point lists differ in length");
  }
  const std::size_t n = points_a.size();
  if (n < 3) throw Error(ErrorCode::kDegenerate, "umeyama_align: need at least 3 point pairs");

  Vec3 mean_a = Vec3::Zero(), mean_b = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += points_a[i];
    mean_b += points_b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);

  Mat3 cross = Mat3::Zero();
  Mat3 spread_a = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 da = points_a[i] - mean_a;
    cross += (points_b[i] - mean_b) * da.transpose();
    spread_a += da * da.transpose();
  }

  const Eigen::SelfAdjointEigenSolver<Mat3> spread(spread_a);
  const Vec3 ev = spread.eigenvalues().cwiseMax(0.0);  // ascending
  if (!(ev(1) > 1e-20 * ev(2)) || ev(2) <= 0.0) {
    throw Error(ErrorCode::kDegenerate, "umeyama_align: points are collinear or coincident");
  }

  const Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 s = Mat3::Identity();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) s(2, 2) = -1.0;
  const Mat3 r = svd.matrixU() * s * svd.matrixV().transpose();
  return Pose::FromMatrix(r, mean_b - r * mean_a);
}

}  // namespace gsreloc
