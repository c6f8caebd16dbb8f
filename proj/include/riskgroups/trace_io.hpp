#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "riskgroups/chain.hpp"

namespace riskgroups {

// One JSON object per line with keys iter, j, e_cur, e_prop, alpha, accepted,
// e_best in that order; e_prop is null for failed proposals.
std::string format_trace_record(const TraceRecord& record);
// Throws DataError on malformed input.
TraceRecord parse_trace_record(const std::string& line);

// Appends records as they arrive and flushes every `flush_every` lines, so an
// interrupted run leaves a readable prefix.
class TraceWriter {
 public:
  explicit TraceWriter(const std::filesystem::path& path, std::size_t flush_every = 256);
  void write(const TraceRecord& record);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t flush_every_;
  std::size_t pending_ = 0;
};

struct TraceReadResult {
  std::vector<TraceRecord> records;
  // Empty when every line parsed; otherwise the reason reading stopped.
  std::vector<std::string> warnings;
};

// Reads the longest valid prefix; a corrupt line ends the read with a warning.
TraceReadResult read_trace(const std::filesystem::path& path);

}  // namespace riskgroups
