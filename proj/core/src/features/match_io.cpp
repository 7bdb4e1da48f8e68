#include "gsreloc/features/match_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "gsreloc/error.hpp"
#include "text_util.hpp"

namespace gsreloc {
namespace {

std::string where(const std::filesystem::path& path, long long line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

MatchFile load_external_matches(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open match file " + path.string());
  std::string line;
  long long line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, where(path, 1) + "missing header");
  ++line_no;
  const auto header = detail::split_ws(line);
  if (header.size() != 7 || header[0] != "matches" || header[1] != "v1") {
    throw Error(ErrorCode::kParse,
                where(path, line_no) + "expected 'matches v1 <query_w> <query_h> <ref_w> <ref_h> <count>'");
  }
  long long dims[5];
  for (int k = 0; k < 5; ++k) {
    const auto v = detail::parse_int(header[k + 2]);
    if (!v || *v < 0 || (k < 4 && *v == 0)) {
      throw Error(ErrorCode::kParse, where(path, line_no) + "bad header value");
    }
    dims[k] = *v;
  }
  MatchFile file;
  file.query_size = {static_cast<int>(dims[0]), static_cast<int>(dims[1])};
  file.ref_size = {static_cast<int>(dims[2]), static_cast<int>(dims[3])};
  file.matches.reserve(static_cast<std::size_t>(dims[4]));

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 5) {
      throw Error(ErrorCode::kParse, where(path, line_no) + "expected 5 values, found " +
                                         std::to_string(tokens.size()));
    }
    double f[5];
    for (int k = 0; k < 5; ++k) {
      const auto v = detail::parse_double(tokens[k]);
      if (!v || !std::isfinite(*v)) throw Error(ErrorCode::kParse, where(path, line_no) + "bad number");
      f[k] = *v;
    }
    FeatureMatch m{Vec2(f[0], f[1]), Vec2(f[2], f[3]), f[4]};
    if (!file.query_size.contains(m.pixel_query) || !file.ref_size.contains(m.pixel_ref)) {
      throw Error(ErrorCode::kOutOfBounds, where(path, line_no) + "pixel outside declared image bounds");
    }
    if (m.confidence < 0.0 || m.confidence > 1.0) {
      throw Error(ErrorCode::kOutOfBounds, where(path, line_no) + "confidence outside [0, 1]");
    }
    file.matches.push_back(m);
  }
  if (static_cast<long long>(file.matches.size()) != dims[4]) {
    throw Error(ErrorCode::kParse, path.string() + ": header declares " + std::to_string(dims[4]) +
                                       " matches but file contains " + std::to_string(file.matches.size()));
  }
  return file;
}

void save_external_matches(const std::filesystem::path& path, const MatchFile& file) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  using detail::format_double;
  out << "matches v1 " << file.query_size.width << ' ' << file.query_size.height << ' '
      << file.ref_size.width << ' ' << file.ref_size.height << ' ' << file.matches.size() << '\n';
  for (const FeatureMatch& m : file.matches) {
    out << format_double(m.pixel_query.x()) << ' ' << format_double(m.pixel_query.y()) << ' '
        << format_double(m.pixel_ref.x()) << ' ' << format_double(m.pixel_ref.y()) << ' '
        << format_double(m.confidence) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace gsreloc
