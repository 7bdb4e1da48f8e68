#include "gsreloc/pose/epnp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "gsreloc/error.hpp"
#include "gsreloc/pose/absolute_orientation.hpp"

namespace gsreloc {
namespace {

using Mat6x10 = Eigen::Matrix<double, 6, 10>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
constexpr int kGaussNewtonIterations = 10;

// Row k holds the coefficients of |C_a - C_b|^2 (pair k) in the products
// [b00 b01 b11 b02 b12 b22 b03 b13 b23 b33] of kernel weights.
Mat6x10 distance_constraints(const std::array<Vec12, 4>& kernel) {
  Mat6x10 l;
  for (int k = 0; k < 6; ++k) {
    const int a = kPairs[k][0], b = kPairs[k][1];
    Vec3 dv[4];
    for (int i = 0; i < 4; ++i) dv[i] = kernel[i].segment<3>(3 * a) - kernel[i].segment<3>(3 * b);
    l(k, 0) = dv[0].dot(dv[0]);
    l(k, 1) = 2.0 * dv[0].dot(dv[1]);
    l(k, 2) = dv[1].dot(dv[1]);
    l(k, 3) = 2.0 * dv[0].dot(dv[2]);
    l(k, 4) = 2.0 * dv[1].dot(dv[2]);
    l(k, 5) = dv[2].dot(dv[2]);
    l(k, 6) = 2.0 * dv[0].dot(dv[3]);
    l(k, 7) = 2.0 * dv[1].dot(dv[3]);
    l(k, 8) = 2.0 * dv[2].dot(dv[3]);
    l(k, 9) = dv[3].dot(dv[3]);
  }
  return l;
}

Eigen::Matrix<double, 10, 1> beta_products(const Eigen::Vector4d& b) {
  Eigen::Matrix<double, 10, 1> p;
  p << b[0] * b[0], b[0] * b[1], b[1] * b[1], b[0] * b[2], b[1] * b[2], b[2] * b[2], b[0] * b[3],
      b[1] * b[3], b[2] * b[3], b[3] * b[3];
  return p;
}

Eigen::Vector4d betas_kernel1(const Mat6x10& l, const Vec6& rho) {
  const double denom = l.col(0).squaredNorm();
  const double b00 = denom > 0.0 ? l.col(0).dot(rho) / denom : 0.0;
  return {std::sqrt(std::abs(b00)), 0.0, 0.0, 0.0};
}

Eigen::Vector4d betas_kernel2(const Mat6x10& l, const Vec6& rho) {
  const Eigen::Vector3d b = l.leftCols<3>().colPivHouseholderQr().solve(rho);
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  if (b[0] < 0.0) {
    out[0] = std::sqrt(-b[0]);
    out[1] = b[2] < 0.0 ? std::sqrt(-b[2]) : 0.0;
  } else {
    out[0] = std::sqrt(b[0]);
    out[1] = b[2] > 0.0 ? std::sqrt(b[2]) : 0.0;
  }
  if (b[1] < 0.0) out[0] = -out[0];
  return out;
}

Eigen::Vector4d betas_kernel3(const Mat6x10& l, const Vec6& rho) {
  const Vec6 b = l.leftCols<6>().colPivHouseholderQr().solve(rho);
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  if (b[0] < 0.0) {
    out[0] = std::sqrt(-b[0]);
    out[1] = b[2] < 0.0 ? std::sqrt(-b[2]) : 0.0;
  } else {
    out[0] = std::sqrt(b[0]);
    out[1] = b[2] > 0.0 ? std::sqrt(b[2]) : 0.0;
  }
  if (b[1] < 0.0) out[0] = -out[0];
  out[2] = out[0] != 0.0 ? b[3] / out[0] : 0.0;
  return out;
}

// Gauss-Newton on rho_k = L_k . products(beta) over all four kernel weights.
void refine_betas(const Mat6x10& l, const Vec6& rho, Eigen::Vector4d& betas) {
  for (int it = 0; it < kGaussNewtonIterations; ++it) {
    Eigen::Matrix<double, 6, 4> a;
    Vec6 r;
    const auto p = beta_products(betas);
    for (int k = 0; k < 6; ++k) {
      const auto row = l.row(k);
      const double b0 = betas[0], b1 = betas[1], b2 = betas[2], b3 = betas[3];
      a(k, 0) = 2 * row[0] * b0 + row[1] * b1 + row[3] * b2 + row[6] * b3;
      a(k, 1) = row[1] * b0 + 2 * row[2] * b1 + row[4] * b2 + row[7] * b3;
      a(k, 2) = row[3] * b0 + row[4] * b1 + 2 * row[5] * b2 + row[8] * b3;
      a(k, 3) = row[6] * b0 + row[7] * b1 + row[8] * b2 + 2 * row[9] * b3;
      r[k] = rho[k] - row.dot(p.transpose());
    }
    const Eigen::Vector4d step = a.colPivHouseholderQr().solve(r);
    if (!step.allFinite()) break;
    betas += step;
  }
}

struct Candidate {
  Pose pose;
  double error = std::numeric_limits<double>::infinity();
};

Candidate pose_from_betas(const std::array<Vec12, 4>& kernel, const Eigen::Vector4d& betas,
                          const ControlPointSet& cps, std::span<const Correspondence2D3D> corrs,
                          std::span<const Vec3> world, const CameraIntrinsics& cam) {
  Vec12 ctrl = Vec12::Zero();
  for (int i = 0; i < 4; ++i) ctrl += betas[i] * kernel[i];

  std::vector<Vec3> cam_points(corrs.size());
  double mean_depth = 0.0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    Vec3 p = Vec3::Zero();
    for (int j = 0; j < 4; ++j) p += cps.weights[i][j] * ctrl.segment<3>(3 * j);
    cam_points[i] = p;
    mean_depth += p.z();
  }
  if (mean_depth < 0.0) {
    for (Vec3& p : cam_points) p = -p;
  }
  std::size_t positive = 0;
  for (const Vec3& p : cam_points) positive += p.z() > 0.0 ? 1 : 0;
  if (2 * positive <= cam_points.size()) return {};

  Pose world_to_cam;
  try {
    world_to_cam = umeyama_align(world, cam_points);
  } catch (const Error&) {
    return {};
  }
  Candidate c;
  c.pose = world_to_cam.inverse();
  double sum = 0.0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const Vec3 pc = world_to_cam.transform(world[i]);
    if (!(pc.z() > 0.0)) return {};
    const Vec2 px(cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy);
    sum += (px - corrs[i].pixel).norm();
  }
  c.error = sum / static_cast<double>(corrs.size());
  return c;
}

}  // namespace

Vec3 ControlPointSet::reconstruct(std::size_t i) const {
  Vec3 p = Vec3::Zero();
  for (int j = 0; j < 4; ++j) p += weights[i][j] * points[j];
  return p;
}

double ControlPointSet::volume() const {
  Mat3 m;
  m.col(0) = points[1] - points[0];
  m.col(1) = points[2] - points[0];
  m.col(2) = points[3] - points[0];
  return std::abs(m.determinant()) / 6.0;
}

ControlPointSet compute_control_points(std::span<const Vec3> world_points) {
  const std::size_t n = world_points.size();
  if (n < 4) throw Error(ErrorCode::kDegenerate, "control points need at least 4 world points");
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : world_points) centroid += p;
  centroid /= static_cast<double>(n);

  Mat3 scatter = Mat3::Zero();
  for (const Vec3& p : world_points) scatter += (p - centroid) * (p - centroid).transpose();
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const Vec3 ev = eig.eigenvalues().cwiseMax(0.0);  // ascending
  // Relative thresholds on squared spreads: 1e-12 ~ thickness below 1e-6 of
  // the largest extent.
  if (!(ev(2) > 0.0) || ev(1) <= 1e-12 * ev(2)) {
    throw Error(ErrorCode::kDegenerate, "world points are collinear");
  }
  if (ev(0) <= 1e-12 * ev(2)) {
    throw Error(ErrorCode::kDegenerate, "world points are coplanar");
  }

  ControlPointSet cps;
  cps.points[0] = centroid;
  Mat3 axes;
  for (int k = 0; k < 3; ++k) {
    // Largest axis first.
    const double spread = std::sqrt(ev(2 - k) / static_cast<double>(n));
    axes.col(k) = spread * eig.eigenvectors().col(2 - k);
    cps.points[k + 1] = centroid + axes.col(k);
  }
  if (!(cps.volume() > 1e-9)) {
    throw Error(ErrorCode::kDegenerate, "control-point tetrahedron volume too small");
  }
  const Mat3 inv = axes.inverse();
  cps.weights.reserve(n);
  for (const Vec3& p : world_points) {
    const Vec3 a = inv * (p - centroid);
    cps.weights.emplace_back(1.0 - a.sum(), a.x(), a.y(), a.z());
  }
  return cps;
}

SolverReport epnp(std::span<const Correspondence2D3D> corrs, const CameraIntrinsics& cam) {
  if (corrs.size() < kEpnpMinPoints) {
    throw Error(ErrorCode::kInsufficientMatches,
                "epnp needs at least 6 correspondences, got " + std::to_string(corrs.size()));
  }
  std::vector<Vec3> world(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) world[i] = corrs[i].world_point;
  const ControlPointSet cps = compute_control_points(world);

  // Projection constraints in normalized image coordinates.
  Eigen::Matrix<double, 12, 12> mtm = Eigen::Matrix<double, 12, 12>::Zero();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const double xn = (corrs[i].pixel.x() - cam.cx) / cam.fx;
    const double yn = (corrs[i].pixel.y() - cam.cy) / cam.fy;
    Eigen::Matrix<double, 2, 12> rows = Eigen::Matrix<double, 2, 12>::Zero();
    for (int j = 0; j < 4; ++j) {
      const double a = cps.weights[i][j];
      rows(0, 3 * j) = a;
      rows(0, 3 * j + 2) = -a * xn;
      rows(1, 3 * j + 1) = a;
      rows(1, 3 * j + 2) = -a * yn;
    }
    mtm.noalias() += rows.transpose() * rows;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 12, 12>> eig(mtm);
  std::array<Vec12, 4> kernel;
  for (int k = 0; k < 4; ++k) kernel[k] = eig.eigenvectors().col(k);

  Vec6 rho;
  for (int k = 0; k < 6; ++k) {
    rho[k] = (cps.points[kPairs[k][0]] - cps.points[kPairs[k][1]]).squaredNorm();
  }
  const Mat6x10 l = distance_constraints(kernel);

  Candidate best;
  for (auto init : {betas_kernel1, betas_kernel2, betas_kernel3}) {
    Eigen::Vector4d betas = init(l, rho);
    refine_betas(l, rho, betas);
    const Candidate c = pose_from_betas(kernel, betas, cps, corrs, world, cam);
    if (c.error < best.error) best = c;
  }
  if (!std::isfinite(best.error)) {
    throw Error(ErrorCode::kNoPositiveDepth, "epnp: no candidate places the points in front of the camera");
  }

  SolverReport report;
  report.pose = best.pose;
  report.inlier_count = corrs.size();
  report.mean_reprojection_error = best.error;
  report.iterations = kGaussNewtonIterations;
  report.converged = true;
  return report;
}

}  // namespace gsreloc
