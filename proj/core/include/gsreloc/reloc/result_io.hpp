#pragma once

#include <filesystem>
#include <string>

#include "gsreloc/reloc/relocalizer.hpp"

namespace gsreloc {

struct QueryResult {
  std::string query_id;
  RelocalizationResult result;
};

// JSON with the pose as [qw, qx, qy, qz, tx, ty, tz] and one object per
// trace. Timings are written only when `with_timings` is set, which keeps
// the document reproducible byte for byte.
std::string result_to_json(const QueryResult& result, bool with_timings);
QueryResult result_from_json(const std::string& text);

void save_result(const std::filesystem::path& path, const QueryResult& result, bool with_timings);
QueryResult load_result(const std::filesystem::path& path);

}  // namespace gsreloc
