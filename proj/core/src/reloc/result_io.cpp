#include "gsreloc/reloc/result_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace gsreloc {
namespace {

using detail::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

std::string result_to_json(const QueryResult& qr, bool with_timings) {
  const RelocalizationResult& r = qr.result;
  json traces = json::array();
  for (const IterationTrace& t : r.traces) {
    json jt = {{"iteration", t.iteration},
               {"pose", detail::pose_to_json(t.pose)},
               {"match_count", t.match_count},
               {"mean_confidence", t.mean_confidence},
               {"uniformity", t.uniformity},
               {"delta", t.delta ? json::array({t.delta->translation, t.delta->rotation}) : json(nullptr)}};
    if (with_timings) {
      jt["timings_ms"] = {{"detect", optional_number(t.detect_ms)},
                          {"match", optional_number(t.match_ms)},
                          {"pnp", optional_number(t.pnp_ms)},
                          {"render", optional_number(t.render_ms)},
                          {"total", optional_number(t.total_ms)}};
    }
    traces.push_back(std::move(jt));
  }
  json j = {{"query_id", qr.query_id},
            {"status", to_string(r.status)},
            {"anchor_id", r.anchor_id},
            {"pose", detail::pose_to_json(r.pose)},
            {"iterations", r.traces.size()},
            {"traces", std::move(traces)}};
  if (r.failure) {
    j["failure"] = {{"code", std::string(to_string(*r.failure))}, {"message", r.failure_message}};
  }
  return j.dump(2) + "\n";
}

QueryResult result_from_json(const std::string& text) {
  return detail::with_parse_context("result", [&] {
    const json j = json::parse(text);
    QueryResult qr;
    qr.query_id = j.at("query_id").get<std::string>();
    RelocalizationResult& r = qr.result;
    r.status = reloc_status_from_string(j.at("status").get<std::string>());
    r.anchor_id = j.at("anchor_id").get<int>();
    r.pose = detail::pose_from_json(j.at("pose"));
    if (const auto f = j.find("failure"); f != j.end()) {
      const auto code = error_code_from_string(f->at("code").get<std::string>());
      if (!code) throw Error(ErrorCode::kParse, "unknown failure code");
      r.failure = *code;
      r.failure_message = f->value("message", std::string());
    }
    for (const json& jt : j.at("traces")) {
      IterationTrace t;
      t.iteration = jt.at("iteration").get<int>();
      t.pose = detail::pose_from_json(jt.at("pose"));
      t.match_count = jt.at("match_count").get<std::size_t>();
      t.mean_confidence = jt.at("mean_confidence").get<double>();
      t.uniformity = jt.at("uniformity").get<double>();
      const json& d = jt.at("delta");
      if (!d.is_null()) t.delta = PoseDelta{d.at(0).get<double>(), d.at(1).get<double>()};
      if (const auto tm = jt.find("timings_ms"); tm != jt.end()) {
        t.detect_ms = number_or_null(*tm, "detect");
        t.match_ms = number_or_null(*tm, "match");
        t.pnp_ms = number_or_null(*tm, "pnp");
        t.render_ms = number_or_null(*tm, "render");
        t.total_ms = number_or_null(*tm, "total");
      }
      r.traces.push_back(std::move(t));
    }
    return qr;
  });
}

void save_result(const std::filesystem::path& path, const QueryResult& result, bool with_timings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << result_to_json(result, with_timings);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

QueryResult load_result(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return result_from_json(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace gsreloc
