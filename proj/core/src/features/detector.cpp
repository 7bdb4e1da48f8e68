#include "gsreloc/features/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "gsreloc/error.hpp"

namespace gsreloc {
namespace {

// Plain single-channel double buffer for the detector internals.
struct Plane {
  int w = 0;
  int h = 0;
  std::vector<double> v;

  Plane(int width, int height) : w(width), h(height), v(static_cast<std::size_t>(width) * height, 0.0) {}
  double& operator()(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
  double operator()(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
  double clamped(int x, int y) const {
    return (*this)(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  }
};

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& x : k) x /= sum;
  return k;
}

Plane blur(const Plane& in, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  Plane tmp(in.w, in.h);
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * in.clamped(x + i, y);
      tmp(x, y) = acc;
    }
  }
  Plane out(in.w, in.h);
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.clamped(x, y + i);
      out(x, y) = acc;
    }
  }
  return out;
}

void gradients(const Plane& img, Plane& gx, Plane& gy) {
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) {
      gx(x, y) = 0.5 * (img.clamped(x + 1, y) - img.clamped(x - 1, y));
      gy(x, y) = 0.5 * (img.clamped(x, y + 1) - img.clamped(x, y - 1));
    }
  }
}

Plane harris_response(const Plane& gray, double sigma_d, double k) {
  const Plane smooth = blur(gray, sigma_d);
  Plane gx(gray.w, gray.h), gy(gray.w, gray.h);
  gradients(smooth, gx, gy);
  Plane xx(gray.w, gray.h), yy(gray.w, gray.h), xy(gray.w, gray.h);
  for (std::size_t i = 0; i < gx.v.size(); ++i) {
    xx.v[i] = gx.v[i] * gx.v[i];
    yy.v[i] = gy.v[i] * gy.v[i];
    xy.v[i] = gx.v[i] * gy.v[i];
  }
  const double sigma_i = 2.0 * sigma_d;
  xx = blur(xx, sigma_i);
  yy = blur(yy, sigma_i);
  xy = blur(xy, sigma_i);
  const double norm = std::pow(sigma_d, 4);
  Plane r(gray.w, gray.h);
  for (std::size_t i = 0; i < r.v.size(); ++i) {
    const double det = xx.v[i] * yy.v[i] - xy.v[i] * xy.v[i];
    const double tr = xx.v[i] + yy.v[i];
    r.v[i] = norm * (det - k * tr * tr);
  }
  return r;
}

double parabola_offset(double left, double center, double right) {
  const double denom = left - 2.0 * center + right;
  if (std::abs(denom) < 1e-300) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

std::vector<float> describe(const Plane& gx, const Plane& gy, int cx, int cy) {
  constexpr int kCells = 4;
  constexpr int kCellSize = 4;
  constexpr int kBins = 8;
  constexpr int kHalf = kCells * kCellSize / 2;
  std::vector<double> hist(kCells * kCells * kBins, 0.0);
  const double window_sigma = kHalf;
  for (int dy = -kHalf; dy < kHalf; ++dy) {
    for (int dx = -kHalf; dx < kHalf; ++dx) {
      const double gxv = gx.clamped(cx + dx, cy + dy);
      const double gyv = gy.clamped(cx + dx, cy + dy);
      const double mag = std::hypot(gxv, gyv);
      if (mag == 0.0) continue;
      const double px = dx + 0.5;
      const double py = dy + 0.5;
      const double weight = mag * std::exp(-(px * px + py * py) / (2.0 * window_sigma * window_sigma));
      // Continuous cell coordinates with cell centers at integers.
      const double cxf = (px + kHalf) / kCellSize - 0.5;
      const double cyf = (py + kHalf) / kCellSize - 0.5;
      double angle = std::atan2(gyv, gxv);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      const double of = angle / (2.0 * std::numbers::pi) * kBins - 0.5;
      const int x0 = static_cast<int>(std::floor(cxf));
      const int y0 = static_cast<int>(std::floor(cyf));
      const int o0 = static_cast<int>(std::floor(of));
      const double fx = cxf - x0, fy = cyf - y0, fo = of - o0;
      for (int iy = 0; iy < 2; ++iy) {
        const int cyi = y0 + iy;
        if (cyi < 0 || cyi >= kCells) continue;
        const double wy = iy ? fy : 1.0 - fy;
        for (int ix = 0; ix < 2; ++ix) {
          const int cxi = x0 + ix;
          if (cxi < 0 || cxi >= kCells) continue;
          const double wx = ix ? fx : 1.0 - fx;
          for (int io = 0; io < 2; ++io) {
            const int bin = ((o0 + io) % kBins + kBins) % kBins;
            const double wo = io ? fo : 1.0 - fo;
            hist[(cyi * kCells + cxi) * kBins + bin] += weight * wx * wy * wo;
          }
        }
      }
    }
  }
  const auto normalize = [&hist] {
    double n = 0.0;
    for (double h : hist) n += h * h;
    n = std::sqrt(n);
    if (n > 0.0) {
      for (double& h : hist) h /= n;
    }
    return n;
  };
  if (normalize() == 0.0) {
    std::fill(hist.begin(), hist.end(), 1.0 / std::sqrt(static_cast<double>(hist.size())));
  } else {
    for (double& h : hist) h = std::min(h, 0.2);
    normalize();
  }
  std::vector<float> out(hist.size());
  std::transform(hist.begin(), hist.end(), out.begin(), [](double h) { return static_cast<float>(h); });
  return out;
}

}  // namespace

std::vector<Keypoint> detect_and_describe(const Image& image, const DetectorConfig& config) {
  if (image.empty() || std::min(image.width(), image.height()) < kMinDetectImageSize) {
    throw Error(ErrorCode::kInvalidArgument, "detect_and_describe: image must be at least 32x32 pixels");
  }
  const Image gray_img = image.to_gray();
  Plane gray(gray_img.width(), gray_img.height());
  for (std::size_t i = 0; i < gray.v.size(); ++i) gray.v[i] = gray_img.data()[i];

  Plane response(gray.w, gray.h);
  std::fill(response.v.begin(), response.v.end(), -std::numeric_limits<double>::infinity());
  if (config.scales.empty()) throw Error(ErrorCode::kInvalidArgument, "detect_and_describe: no scales");
  // Coarse scales decide which corners exist; the finest one places them,
  // since the Harris peak drifts inward as the window grows.
  double finest_sigma = config.scales.front();
  for (double sigma : config.scales) finest_sigma = std::min(finest_sigma, sigma);
  double coarsest_sigma = finest_sigma;
  for (double sigma : config.scales) coarsest_sigma = std::max(coarsest_sigma, sigma);
  Plane fine(gray.w, gray.h);
  for (double sigma : config.scales) {
    const Plane r = harris_response(gray, sigma, config.harris_k);
    for (std::size_t i = 0; i < r.v.size(); ++i) response.v[i] = std::max(response.v[i], r.v[i]);
    if (sigma == finest_sigma) fine = r;
  }
  double max_r = 0.0;
  for (double r : response.v) max_r = std::max(max_r, r);
  const double threshold = std::max(config.absolute_threshold, config.relative_threshold * max_r);

  struct Candidate {
    int x, y;
    double r;
  };
  std::vector<Candidate> candidates;
  const int border = std::max(config.border, 1);
  const int rad = config.nms_radius;
  for (int y = border; y < gray.h - border; ++y) {
    for (int x = border; x < gray.w - border; ++x) {
      const double r = response(x, y);
      if (!(r > threshold)) continue;
      bool is_max = true;
      for (int dy = -rad; dy <= rad && is_max; ++dy) {
        for (int dx = -rad; dx <= rad; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const double other = response.clamped(x + dx, y + dy);
          // Plateaus resolve to the first pixel in raster order.
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (earlier ? other >= r : other > r) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({x, y, r});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.r > b.r; });
  const auto max_keypoints = static_cast<std::size_t>(std::max(0, config.max_keypoints));

  const Plane smooth = blur(gray, 1.0);
  Plane gx(gray.w, gray.h), gy(gray.w, gray.h);
  gradients(smooth, gx, gy);

  const int search = static_cast<int>(std::ceil(2.0 * (coarsest_sigma - finest_sigma)));
  std::vector<Keypoint> keypoints;
  keypoints.reserve(std::min(candidates.size(), max_keypoints));
  std::set<std::pair<int, int>> taken;
  for (const Candidate& c : candidates) {
    if (keypoints.size() >= max_keypoints) break;
    int bx = c.x, by = c.y;
    for (int dy = -search; dy <= search; ++dy) {
      for (int dx = -search; dx <= search; ++dx) {
        const int x = std::clamp(c.x + dx, border, gray.w - border - 1);
        const int y = std::clamp(c.y + dy, border, gray.h - border - 1);
        if (fine(x, y) > fine(bx, by)) {
          bx = x;
          by = y;
        }
      }
    }
    // Two coarse peaks can settle on the same fine one; the stronger wins.
    if (!taken.emplace(bx, by).second) continue;
    Keypoint kp;
    const double ox = parabola_offset(fine(bx - 1, by), fine(bx, by), fine(bx + 1, by));
    const double oy = parabola_offset(fine(bx, by - 1), fine(bx, by), fine(bx, by + 1));
    kp.position = Vec2(bx + ox, by + oy);
    kp.score = max_r > 0.0 ? std::clamp(c.r / max_r, 0.0, 1.0) : 0.0;
    kp.descriptor = describe(gx, gy, bx, by);
    keypoints.push_back(std::move(kp));
  }
  return keypoints;
}

}  // namespace gsreloc
