#include "gsreloc/reloc/anchors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gsreloc/error.hpp"

namespace gsreloc {
namespace {

void normalize_block(GlobalDescriptor& d, std::size_t begin, std::size_t end) {
  double sq = 0.0;
  for (std::size_t i = begin; i < end; ++i) sq += d[i] * d[i];
  if (sq <= 0.0) return;
  const double inv = 1.0 / std::sqrt(sq);
  for (std::size_t i = begin; i < end; ++i) d[i] *= inv;
}

}  // namespace

AnchorDatabase build_anchor_db(const SplatScene& scene, const Trajectory& trajectory,
                               const CameraIntrinsics& cam, double spacing,
                               const RenderConfig& render_config) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::kInvalidArgument, "anchor spacing must be positive");
  }
  cam.validate();
  if (trajectory.empty() || trajectory.path_length() < spacing) {
    throw Error(ErrorCode::kTrajectoryTooShort, "trajectory length " +
                                                    std::to_string(trajectory.path_length()) +
                                                    " m is shorter than the anchor spacing");
  }
  AnchorDatabase db;
  db.camera = cam;
  db.spacing = spacing;
  const Pose* last = nullptr;
  for (const StampedPose& sp : trajectory) {
    if (last != nullptr && (sp.pose.translation() - last->translation()).norm() < spacing - 1e-9) continue;
    RenderOutput r = render(scene, sp.pose, cam, render_config);
    AnchorRecord a;
    a.id = static_cast<int>(sp.index);
    a.pose = sp.pose;
    a.rgb = quantize_8bit(r.rgb);
    a.depth = std::move(r.depth);
    a.descriptor = global_descriptor(a.rgb);
    db.anchors.push_back(std::move(a));
    last = &sp.pose;
  }
  return db;
}

GlobalDescriptor global_descriptor(const Image& image) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "global_descriptor: empty image");
  const Image gray = image.to_gray();
  const int w = gray.width();
  const int h = gray.height();
  GlobalDescriptor d(kGlobalDescriptorSize, 0.0);

  // Block means on a grid four times finer than the thumbnail, then a
  // Gaussian of one thumbnail cell sampled at the cell centers. The overlap
  // keeps the thumbnail correlated under parallax of a block or more.
  constexpr int kSub = 4;
  constexpr int kGrid = kThumbnailSize * kSub;
  std::vector<double> grid(kGrid * kGrid, 0.0);
  std::vector<int> grid_count(kGrid * kGrid, 0);
  for (int y = 0; y < h; ++y) {
    const int gy = y * kGrid / h;
    for (int x = 0; x < w; ++x) {
      const int g = gy * kGrid + x * kGrid / w;
      grid[g] += gray.at(x, y);
      ++grid_count[g];
    }
  }
  for (int g = 0; g < kGrid * kGrid; ++g) {
    if (grid_count[g] > 0) grid[g] /= grid_count[g];
  }
  std::array<std::array<double, kGrid>, kThumbnailSize> weight{};
  for (int t = 0; t < kThumbnailSize; ++t) {
    const double center = (t + 0.5) * kSub - 0.5;
    for (int g = 0; g < kGrid; ++g) {
      const double u = (g - center) / kSub;
      weight[t][g] = std::exp(-0.5 * u * u);
    }
  }
  double mean = 0.0;
  for (int ty = 0; ty < kThumbnailSize; ++ty) {
    for (int tx = 0; tx < kThumbnailSize; ++tx) {
      double acc = 0.0, wsum = 0.0;
      for (int gy = 0; gy < kGrid; ++gy) {
        for (int gx = 0; gx < kGrid; ++gx) {
          if (grid_count[gy * kGrid + gx] == 0) continue;
          const double wgt = weight[ty][gy] * weight[tx][gx];
          acc += wgt * grid[gy * kGrid + gx];
          wsum += wgt;
        }
      }
      d[ty * kThumbnailSize + tx] = wsum > 0.0 ? acc / wsum : 0.0;
      mean += d[ty * kThumbnailSize + tx];
    }
  }
  // Zero mean, so the cosine sees layout rather than overall brightness.
  mean /= kThumbnailSize * kThumbnailSize;
  for (int c = 0; c < kThumbnailSize * kThumbnailSize; ++c) d[c] -= mean;

  const std::size_t hist = kThumbnailSize * kThumbnailSize;
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = 0.5 * (gray.at(x + 1, y) - gray.at(x - 1, y));
      const double gy = 0.5 * (gray.at(x, y + 1) - gray.at(x, y - 1));
      const double mag = std::hypot(gx, gy);
      if (mag <= 0.0) continue;
      double angle = std::atan2(gy, gx);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      int bin = static_cast<int>(angle / (2.0 * std::numbers::pi) * kOrientationBins);
      if (bin >= kOrientationBins) bin = kOrientationBins - 1;
      d[hist + bin] += mag;
    }
  }

  normalize_block(d, 0, hist);
  normalize_block(d, hist, d.size());
  normalize_block(d, 0, d.size());
  return d;
}

double cosine_similarity(const GlobalDescriptor& a, const GlobalDescriptor& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "descriptor sizes differ");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

const AnchorRecord& retrieve(const Image& query, const AnchorDatabase& db) {
  if (db.anchors.empty()) throw Error(ErrorCode::kEmptyDatabase, "retrieve: anchor database is empty");
  const GlobalDescriptor q = global_descriptor(query);
  const AnchorRecord* best = nullptr;
  double best_sim = -2.0;
  for (const AnchorRecord& a : db.anchors) {
    const double s = cosine_similarity(q, a.descriptor);
    if (s > best_sim || (s == best_sim && a.id < best->id)) {
      best = &a;
      best_sim = s;
    }
  }
  return *best;
}

}  // namespace gsreloc
