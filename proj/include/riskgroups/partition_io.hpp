#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "riskgroups/partition.hpp"

namespace riskgroups {

// Contents of a `code,group[,label]` CSV.
struct PartitionFile {
  Partition partition;
  // Per-code human tags in vocabulary order; empty when the file had no label column.
  std::vector<std::string> tags;
};

struct PartitionReadOptions {
  // Group count to enforce; inferred as max(group) + 1 when absent.
  std::optional<int> k;
  // Codes to skip silently (e.g. removed by the prevalence screen).
  std::vector<std::string> ignorable;
};

// Validates totality against the vocabulary. Missing, unknown, and duplicated
// codes are reported by name in a single DataError.
PartitionFile read_partition(std::istream& in, const VocabularyPtr& vocabulary,
                             const PartitionReadOptions& options = {}, const std::string& source = "<stream>");
PartitionFile load_partition(const std::filesystem::path& path, const VocabularyPtr& vocabulary,
                             const PartitionReadOptions& options = {});

void write_partition(std::ostream& out, const Partition& p, const std::vector<std::string>& tags = {});

}  // namespace riskgroups
