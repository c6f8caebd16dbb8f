#include "riskgroups/trace_io.hpp"

#include "json.hpp"
#include "riskgroups/error.hpp"

namespace riskgroups {

std::string format_trace_record(const TraceRecord& r) {
  nlohmann::ordered_json j;
  j["iter"] = r.iter;
  j["j"] = r.j;
  j["e_cur"] = r.e_cur;
  if (r.e_prop)
    j["e_prop"] = *r.e_prop;
  else
    j["e_prop"] = nullptr;
  j["alpha"] = r.alpha;
  j["accepted"] = r.accepted;
  j["e_best"] = r.e_best;
  return j.dump();
}

TraceRecord parse_trace_record(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  try {
    TraceRecord r;
    r.iter = j.at("iter").get<std::size_t>();
    r.j = j.at("j").get<std::size_t>();
    r.e_cur = j.at("e_cur").get<double>();
    if (!j.at("e_prop").is_null()) r.e_prop = j.at("e_prop").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.accepted = j.at("accepted").get<bool>();
    r.e_best = j.at("e_best").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed trace record: ") + e.what());
  }
}

TraceWriter::TraceWriter(const std::filesystem::path& path, std::size_t flush_every)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), flush_every_(flush_every ? flush_every : 1) {
  if (!out_) throw DataError("cannot open trace file '" + path.string() + "' for writing");
}

void TraceWriter::write(const TraceRecord& record) {
  out_ << format_trace_record(record) << '\n';
  if (++pending_ >= flush_every_) {
    out_.flush();
    pending_ = 0;
  }
  if (!out_) throw DataError("write failed on trace file '" + path_.string() + "'");
}

void TraceWriter::close() {
  if (!out_.is_open()) return;
  out_.flush();
  out_.close();
  if (out_.fail()) throw DataError("cannot finish trace file '" + path_.string() + "'");
}

TraceReadResult read_trace(const std::filesystem::path& path) {
  TraceReadResult result;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    result.warnings.push_back("cannot open trace '" + path.string() + "'");
    return result;
  }
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      auto record = parse_trace_record(line);
      if (record.iter != result.records.size())
        throw DataError("expected iter " + std::to_string(result.records.size()) + ", found " +
                        std::to_string(record.iter));
      result.records.push_back(record);
    } catch (const DataError& e) {
      result.warnings.push_back(path.string() + ":" + std::to_string(number) + ": " + e.what() +
                                "; kept the first " + std::to_string(result.records.size()) + " records");
      break;
    }
  }
  return result;
}

}  // namespace riskgroups
