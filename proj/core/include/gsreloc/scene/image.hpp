#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace gsreloc {

// Row-major interleaved float image.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  float& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  // Luma for 3-channel images, identity copy for 1-channel images.
  Image to_gray() const;

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

// Rounds every channel to the nearest multiple of 1/255, i.e. what survives
// an 8-bit export.
Image quantize_8bit(const Image& image);

// 8-bit binary PPM (P6); values are clamped to [0, 1] before quantization.
void write_ppm(const std::filesystem::path& path, const Image& rgb);
Image read_ppm(const std::filesystem::path& path);

// Raw depth dump: three little-endian int32 (width, height, 1) followed by
// width*height little-endian float32 values, row-major.
void write_depth(const std::filesystem::path& path, const Image& depth);
Image read_depth(const std::filesystem::path& path);

}  // namespace gsreloc
