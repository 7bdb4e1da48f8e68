#include "gsreloc/scene/image.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gsreloc/error.hpp"

namespace gsreloc {
namespace {

static_assert(std::endian::native == std::endian::little,
              "depth dumps are written in native order and assume a little-endian host");

std::uint8_t to_byte(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

// Skips whitespace and '#' comments between PPM header tokens.
int read_header_int(std::istream& in, const std::filesystem::path& path) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) {
    throw Error(ErrorCode::kParse, "malformed PPM header in " + path.string());
  }
  return value;
}

}  // namespace

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image Image::to_gray() const {
  if (channels_ == 1) return *this;
  Image gray(width_, height_, 1);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      gray.at(x, y) = 0.299f * at(x, y, 0) + 0.587f * at(x, y, 1) + 0.114f * at(x, y, 2);
    }
  }
  return gray;
}

Image quantize_8bit(const Image& image) {
  Image out = image;
  for (float& v : out.data()) v = static_cast<float>(to_byte(v)) / 255.0f;
  return out;
}

void write_ppm(const std::filesystem::path& path, const Image& rgb) {
  if (rgb.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "write_ppm expects a 3-channel image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "P6\n" << rgb.width() << ' ' << rgb.height() << "\n255\n";
  std::vector<char> bytes(rgb.size());
  std::transform(rgb.data().begin(), rgb.data().end(), bytes.begin(),
                 [](float v) { return static_cast<char>(to_byte(v)); });
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P6") throw Error(ErrorCode::kParse, path.string() + " is not a binary PPM (P6)");
  const int width = read_header_int(in, path);
  const int height = read_header_int(in, path);
  const int maxval = read_header_int(in, path);
  if (width <= 0 || height <= 0 || maxval != 255) {
    throw Error(ErrorCode::kParse, "unsupported PPM dimensions or maxval in " + path.string());
  }
  in.get();  // single whitespace after maxval
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw Error(ErrorCode::kParse, "truncated PPM payload in " + path.string());
  }
  Image rgb(width, height, 3);
  std::transform(bytes.begin(), bytes.end(), rgb.data().begin(),
                 [](unsigned char b) { return static_cast<float>(b) / 255.0f; });
  return rgb;
}

void write_depth(const std::filesystem::path& path, const Image& depth) {
  if (depth.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "write_depth expects a 1-channel image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  const std::int32_t header[3] = {depth.width(), depth.height(), 1};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(depth.data().data()),
            static_cast<std::streamsize>(depth.size() * sizeof(float)));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

Image read_depth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::int32_t header[3] = {0, 0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || header[0] <= 0 || header[1] <= 0 || header[2] != 1) {
    throw Error(ErrorCode::kParse, "malformed depth header in " + path.string());
  }
  Image depth(header[0], header[1], 1);
  const auto bytes = static_cast<std::streamsize>(depth.size() * sizeof(float));
  in.read(reinterpret_cast<char*>(depth.data().data()), bytes);
  if (in.gcount() != bytes) throw Error(ErrorCode::kParse, "truncated depth payload in " + path.string());
  return depth;
}

}  // namespace gsreloc
