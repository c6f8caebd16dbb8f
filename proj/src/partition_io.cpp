#include "riskgroups/partition_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "riskgroups/error.hpp"

namespace riskgroups {
namespace {

std::string join_limited(const std::vector<std::string>& items, std::size_t limit = 20) {
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  if (items.size() > limit) out += ", ... (" + std::to_string(items.size()) + " total)";
  return out;
}

}  // namespace

PartitionFile read_partition(std::istream& in, const VocabularyPtr& vocabulary, const PartitionReadOptions& options,
                             const std::string& source) {
  if (!vocabulary) throw UsageError("partition loader requires a vocabulary");
  auto where = [&source](std::size_t line) { return source + ":" + std::to_string(line) + ": "; };

  std::string line;
  if (!std::getline(in, line)) throw DataError(where(1) + "empty partition file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool tagged = false;
  if (line == "code,group,label") {
    tagged = true;
  } else if (line != "code,group") {
    throw DataError(where(1) + "expected header 'code,group' or 'code,group,label'");
  }

  const std::size_t n = vocabulary->size();
  std::vector<long> group(n, -1);
  std::vector<std::string> tags(tagged ? n : 0);
  std::vector<std::string> unknown, duplicated;
  std::size_t line_no = 1;
  long max_group = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto first = line.find(',');
    if (first == std::string::npos) throw DataError(where(line_no) + "expected 'code,group'");
    const auto second = line.find(',', first + 1);
    if (!tagged && second != std::string::npos) throw DataError(where(line_no) + "unexpected extra column");
    if (tagged && second == std::string::npos) throw DataError(where(line_no) + "missing label column");
    const std::string code = line.substr(0, first);
    const std::string group_text =
        line.substr(first + 1, (second == std::string::npos ? line.size() : second) - first - 1);
    long g = -1;
    auto [ptr, ec] = std::from_chars(group_text.data(), group_text.data() + group_text.size(), g);
    if (ec != std::errc() || ptr != group_text.data() + group_text.size() || g < 0)
      throw DataError(where(line_no) + "group must be a nonnegative integer, got '" + group_text + "'");
    if (options.k && g >= *options.k)
      throw DataError(where(line_no) + "group " + std::to_string(g) + " outside [0, " + std::to_string(*options.k - 1) +
                      "]");
    const auto idx = vocabulary->find(code);
    if (!idx) {
      if (std::find(options.ignorable.begin(), options.ignorable.end(), code) == options.ignorable.end())
        unknown.push_back(code);
      continue;
    }
    if (group[*idx] >= 0) {
      duplicated.push_back(code);
      continue;
    }
    group[*idx] = g;
    max_group = std::max(max_group, g);
    if (tagged) tags[*idx] = line.substr(second + 1);
  }

  std::vector<std::string> missing;
  for (std::size_t c = 0; c < n; ++c)
    if (group[c] < 0) missing.push_back(vocabulary->code(static_cast<CodeIndex>(c)));
  if (!missing.empty() || !unknown.empty() || !duplicated.empty()) {
    std::ostringstream msg;
    msg << source << ": partition does not match the vocabulary";
    if (!missing.empty()) msg << "; missing codes: " << join_limited(missing);
    if (!unknown.empty()) msg << "; unknown codes: " << join_limited(unknown);
    if (!duplicated.empty()) msg << "; duplicated codes: " << join_limited(duplicated);
    throw DataError(msg.str());
  }

  const int k = options.k ? *options.k : std::max<int>(2, static_cast<int>(max_group) + 1);
  std::vector<GroupLabel> assign(n);
  for (std::size_t c = 0; c < n; ++c) assign[c] = static_cast<GroupLabel>(group[c]);
  return PartitionFile{Partition(vocabulary, k, std::move(assign)), std::move(tags)};
}

PartitionFile load_partition(const std::filesystem::path& path, const VocabularyPtr& vocabulary,
                             const PartitionReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open partition file '" + path.string() + "'");
  return read_partition(in, vocabulary, options, path.string());
}

void write_partition(std::ostream& out, const Partition& p, const std::vector<std::string>& tags) {
  if (!tags.empty() && tags.size() != p.size()) throw UsageError("partition tags must cover every code");
  out << (tags.empty() ? "code,group\n" : "code,group,label\n");
  const auto& vocab = *p.vocabulary();
  for (std::size_t c = 0; c < p.size(); ++c) {
    out << vocab.code(static_cast<CodeIndex>(c)) << ',' << p[static_cast<CodeIndex>(c)];
    if (!tags.empty()) out << ',' << tags[c];
    out << '\n';
  }
}

}  // namespace riskgroups
