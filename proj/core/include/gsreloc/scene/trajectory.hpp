#pragma once

#include <filesystem>
#include <vector>

#include "gsreloc/scene/pose.hpp"

namespace gsreloc {

struct StampedPose {
  long long index = 0;
  Pose pose;
};

// Ordered poses with strictly increasing indices.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<StampedPose> poses);
  // Indices 0, 1, 2, ... in order.
  static Trajectory FromPoses(const std::vector<Pose>& poses);

  void push_back(long long index, const Pose& pose);

  std::size_t size() const { return poses_.size(); }
  bool empty() const { return poses_.empty(); }
  const StampedPose& operator[](std::size_t i) const { return poses_[i]; }
  auto begin() const { return poses_.begin(); }
  auto end() const { return poses_.end(); }

  // Sum of consecutive translation gaps, meters.
  double path_length() const;

 private:
  std::vector<StampedPose> poses_;
};

// KITTI odometry pose format: one line per frame with the 12 row-major
// entries of the 3x4 camera-to-world [R|t]. Line k gets index k.
Trajectory load_kitti_poses(const std::filesystem::path& path);
void save_kitti_poses(const std::filesystem::path& path, const Trajectory& trajectory);

}  // namespace gsreloc
