#include "gsreloc/scene/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "gsreloc/error.hpp"
#include "text_util.hpp"

namespace gsreloc {

Trajectory::Trajectory(std::vector<StampedPose> poses) {
  poses_.reserve(poses.size());
  for (const auto& p : poses) push_back(p.index, p.pose);
}

Trajectory Trajectory::FromPoses(const std::vector<Pose>& poses) {
  Trajectory t;
  for (std::size_t i = 0; i < poses.size(); ++i) t.push_back(static_cast<long long>(i), poses[i]);
  return t;
}

void Trajectory::push_back(long long index, const Pose& pose) {
  if (!poses_.empty() && index <= poses_.back().index) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory indices must be strictly increasing");
  }
  poses_.push_back({index, pose});
}

double Trajectory::path_length() const {
  double length = 0.0;
  for (std::size_t i = 1; i < poses_.size(); ++i) {
    length += (poses_[i].pose.translation() - poses_[i - 1].pose.translation()).norm();
  }
  return length;
}

Trajectory load_kitti_poses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open pose file " + path.string());
  Trajectory trajectory;
  std::string line;
  long long line_no = 0;
  long long index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 12) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) +
                                         ": expected 12 values, found " + std::to_string(tokens.size()));
    }
    Eigen::Matrix<double, 3, 4> m;
    for (int k = 0; k < 12; ++k) {
      const auto v = detail::parse_double(tokens[k]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": bad number");
      }
      m(k / 4, k % 4) = *v;
    }
    const Mat3 r = m.leftCols<3>();
    if ((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-4 || r.determinant() < 0.0) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_no) + ": rotation block is not orthonormal");
    }
    trajectory.push_back(index++, Pose::FromMatrix(r, m.col(3)));
  }
  return trajectory;
}

void save_kitti_poses(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  for (const auto& stamped : trajectory) {
    const Mat3 r = stamped.pose.rotation_matrix();
    const Vec3& t = stamped.pose.translation();
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 4; ++col) {
        if (row || col) out << ' ';
        out << detail::format_double(col < 3 ? r(row, col) : t(row));
      }
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace gsreloc
